/*
 * Copyright 2026 The Phinder Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "phinder/engine.hpp"

#include <algorithm>
#include <array>

namespace phinder {

namespace {

auto fail(engine_error_kind k, std::string msg) -> unexpected<engine_error>
{
	return unexpected{engine_error{k, std::move(msg)}};
}

auto running(game_phase p) -> bool
{
	return p == game_phase::awaiting_decision || p == game_phase::awaiting_concept_id;
}

auto summary_of(const worm &w) -> std::string
{
	if (const auto *m = std::get_if<email_message>(&w.content())) {
		return "email from " + m->from.str() + ": " + m->subject;
	}
	return std::get<url>(w.content()).raw;
}

auto advice_of(const detection_report &r) -> std::vector<std::string>
{
	if (r.advice.empty()) {
		return {no_issues_advice()};
	}
	return r.advice;
}

void clear_worm(game_state &s)
{
	s.active_worm.reset();
	s.active_report.reset();
	s.bonus_deadline.reset();
	s.shifu_advice_pending.reset();
}

/* Deducts wall time since the last settle; true when the clock ran out. */
auto settle(game_state &s, timestamp at) -> bool
{
	if (at > s.last_settled_at) {
		auto elapsed = at - s.last_settled_at;
		s.level_clock_remaining = std::max(timestamp{0}, s.level_clock_remaining - elapsed);
		s.last_settled_at = at;
	}
	return s.level_clock_remaining == timestamp{0};
}

auto base_feedback(const game_state &s, feedback_outcome o) -> feedback
{
	feedback fb{};
	fb.outcome = o;
	fb.level = s.level;
	if (s.active_worm) {
		fb.worm_id = s.active_worm->id();
		fb.worm_summary = summary_of(*s.active_worm);
	}
	return fb;
}

auto expire(game_state &s) -> feedback
{
	auto fb = base_feedback(s, feedback_outcome::time_expired);
	clear_worm(s);
	s.phase = game_phase::level_failed;
	fb.phase_after = s.phase;
	s.last_feedback = fb;
	return fb;
}

auto present(game_state &s, timestamp at) -> result<unit, engine_error>
{
	const auto &cfg = s.level_cfg();
	auto gen = generate_worm(cfg, s.ctx->items, s.ctx->brands, s.ctx->rules, s.rng);
	if (!gen) {
		return fail(engine_error_kind::generation_failed, gen.error().message);
	}
	s.rng = gen->next;
	s.active_report = detect(gen->value.content(), s.ctx->brands, s.ctx->rules);
	s.bonus_deadline.reset();
	if (gen->value.bonus()) {
		s.bonus_deadline = at + std::chrono::duration_cast<timestamp>(cfg.bonus_window);
	}
	s.active_worm = std::move(gen->value);
	s.shifu_advice_pending.reset();
	s.worms_presented++;
	s.presented_at = at;
	s.phase = game_phase::awaiting_decision;
	return unit{};
}

auto next_or_complete(game_state &s, timestamp at) -> result<unit, engine_error>
{
	clear_worm(s);
	if (s.worms_resolved >= s.level_cfg().worm_count) {
		s.phase = s.level == s.ctx->final_level() ? game_phase::game_won : game_phase::level_complete;
		return unit{};
	}
	return present(s, at);
}

void reset_level(game_state &s)
{
	const auto &cfg = s.level_cfg();
	s.phase = game_phase::level_intro;
	s.lives = s.ctx->scoring.lives_per_level;
	s.level_clock_remaining = std::chrono::duration_cast<timestamp>(cfg.time_limit);
	s.worms_presented = 0;
	s.worms_resolved = 0;
	s.wrong_in_level = 0;
	clear_worm(s);
}

auto classify(game_state &s, bool eat, timestamp at) -> result<feedback, engine_error>
{
	const auto &w = *s.active_worm;
	const bool phishing = w.ground_truth() == label::phishing;
	const bool correct = eat != phishing;

	feedback_outcome outcome;
	if (correct) {
		outcome = eat ? feedback_outcome::correct_eat : feedback_outcome::correct_avoid;
	}
	else {
		outcome = eat ? feedback_outcome::wrong_eat : feedback_outcome::wrong_avoid;
	}

	auto fb = base_feedback(s, outcome);
	fb.revealed_label = w.ground_truth();
	fb.revealed_concepts = w.intended_concepts();
	fb.decision_time = at - s.presented_at;
	s.worms_resolved++;

	if (correct) {
		fb.points_delta = s.ctx->scoring.points_per_classification;
		s.score += fb.points_delta;
		s.correct_classifications++;
		if (w.bonus() && s.bonus_deadline && at <= *s.bonus_deadline) {
			fb.medal_awarded = true;
			s.medals.push_back({s.level, w.id()});
		}
	}
	else {
		fb.lives_delta = -1;
		s.lives--;
		s.wrong_in_level++;
		fb.advice = advice_of(*s.active_report);
	}
	accumulate_stats(s.stats, fb);

	if (!correct && s.lives == 0) {
		clear_worm(s);
		s.phase = game_phase::game_over;
	}
	else if (outcome == feedback_outcome::correct_avoid) {
		/* Shifu asks what gave it away; the worm stays for the quiz */
		s.bonus_deadline.reset();
		s.phase = game_phase::awaiting_concept_id;
	}
	else if (auto r = next_or_complete(s, at); !r) {
		return unexpected{r.error()};
	}
	return fb;
}

auto ask_shifu(game_state &s) -> feedback
{
	auto fb = base_feedback(s, feedback_outcome::shifu_advice);
	fb.advice = advice_of(*s.active_report);
	s.shifu_advice_pending = s.active_report;
	auto cost = std::chrono::duration_cast<timestamp>(s.ctx->scoring.shifu_cost);
	s.level_clock_remaining = std::max(timestamp{0}, s.level_clock_remaining - cost);
	if (s.level_clock_remaining == timestamp{0}) {
		clear_worm(s);
		s.phase = game_phase::level_failed;
	}
	return fb;
}

auto quiz(game_state &s, phishing_concept c, timestamp at) -> result<feedback, engine_error>
{
	const auto &w = *s.active_worm;
	auto fb = base_feedback(s, feedback_outcome::quiz_result);
	fb.answered = c;
	fb.quiz_correct = w.intended_concepts().contains(c);
	fb.revealed_label = w.ground_truth();
	fb.revealed_concepts = w.intended_concepts();
	fb.advice = advice_of(*s.active_report);
	if (fb.quiz_correct) {
		fb.points_delta = s.ctx->scoring.points_per_quiz_answer;
		s.score += fb.points_delta;
		s.correct_answers++;
	}
	accumulate_stats(s.stats, fb);
	if (auto r = next_or_complete(s, at); !r) {
		return unexpected{r.error()};
	}
	return fb;
}

}// namespace

auto game_context::level(int n) const -> const level_config *
{
	if (n < 1 || n > final_level()) {
		return nullptr;
	}
	return &levels[static_cast<std::size_t>(n - 1)];
}

auto to_string(engine_error_kind k) -> std::string_view
{
	switch (k) {
	case engine_error_kind::unknown_level:
		return "unknown_level";
	case engine_error_kind::invalid_corpus:
		return "invalid_corpus";
	case engine_error_kind::illegal_phase:
		return "illegal_phase";
	case engine_error_kind::illegal_action:
		return "illegal_action";
	case engine_error_kind::stale_timestamp:
		return "stale_timestamp";
	case engine_error_kind::no_next_level:
		return "no_next_level";
	case engine_error_kind::generation_failed:
		return "generation_failed";
	}
	return "unknown";
}

auto to_string(game_phase p) -> std::string_view
{
	switch (p) {
	case game_phase::level_intro:
		return "level_intro";
	case game_phase::awaiting_decision:
		return "awaiting_decision";
	case game_phase::awaiting_concept_id:
		return "awaiting_concept_id";
	case game_phase::feedback:
		return "feedback";
	case game_phase::level_complete:
		return "level_complete";
	case game_phase::level_failed:
		return "level_failed";
	case game_phase::game_won:
		return "game_won";
	case game_phase::game_over:
		return "game_over";
	}
	return "unknown";
}

static constexpr std::array action_names{"eat", "avoid", "ask_shifu", "identify_concept"};

auto to_string(action_kind k) -> std::string_view
{
	return action_names[static_cast<std::size_t>(k)];
}

auto action_from_string(std::string_view s) -> std::optional<action_kind>
{
	for (std::size_t i = 0; i < action_names.size(); ++i) {
		if (s == action_names[i]) {
			return static_cast<action_kind>(i);
		}
	}
	return std::nullopt;
}

auto to_string(feedback_outcome o) -> std::string_view
{
	switch (o) {
	case feedback_outcome::correct_eat:
		return "correct_eat";
	case feedback_outcome::correct_avoid:
		return "correct_avoid";
	case feedback_outcome::wrong_eat:
		return "wrong_eat";
	case feedback_outcome::wrong_avoid:
		return "wrong_avoid";
	case feedback_outcome::shifu_advice:
		return "shifu_advice";
	case feedback_outcome::quiz_result:
		return "quiz_result";
	case feedback_outcome::bonus_expired:
		return "bonus_expired";
	case feedback_outcome::time_expired:
		return "time_expired";
	}
	return "unknown";
}

void accumulate_stats(concept_stats_map &stats, const feedback &fb)
{
	switch (fb.outcome) {
	case feedback_outcome::correct_eat:
	case feedback_outcome::correct_avoid:
	case feedback_outcome::wrong_eat:
	case feedback_outcome::wrong_avoid:
		if (fb.revealed_label == label::phishing) {
			for (auto c : fb.revealed_concepts) {
				stats[c].seen++;
				if (fb.outcome == feedback_outcome::correct_avoid) {
					stats[c].correct_classifications++;
				}
			}
		}
		break;
	case feedback_outcome::quiz_result:
		if (fb.quiz_correct && fb.answered) {
			stats[*fb.answered].correct_identifications++;
		}
		break;
	default:
		break;
	}
}

auto make_context(std::vector<level_config> levels, corpus items, brand_directory brands, rule_config rules,
				  game_rules scoring) -> result<std::shared_ptr<const game_context>, engine_error>
{
	if (levels.empty()) {
		return fail(engine_error_kind::unknown_level, "no levels configured");
	}
	for (std::size_t i = 0; i < levels.size(); ++i) {
		if (levels[i].level != static_cast<int>(i + 1)) {
			return fail(engine_error_kind::unknown_level, "levels must be numbered 1..n in order");
		}
		if (auto why = levels[i].validate(); !why.empty()) {
			return fail(engine_error_kind::unknown_level, "level " + std::to_string(i + 1) + ": " + why);
		}
	}
	if (scoring.lives_per_level < 1 || scoring.points_per_classification < 0 || scoring.points_per_quiz_answer < 0) {
		return fail(engine_error_kind::illegal_action, "invalid scoring rules");
	}
	if (items.items.empty()) {
		return fail(engine_error_kind::invalid_corpus, "corpus is empty");
	}
	if (auto bad = validate_corpus(items, brands, rules); !bad.empty()) {
		return fail(engine_error_kind::invalid_corpus,
					std::to_string(bad.size()) + " corpus items are not clean, first: " + bad.front().item_id);
	}
	return std::make_shared<const game_context>(
		game_context{std::move(levels), std::move(items), std::move(brands), std::move(rules), scoring});
}

auto default_context() -> std::shared_ptr<const game_context>
{
	static const auto ctx = make_context(default_levels(), bundled_corpus(), default_brands(), rule_config{}).value();
	return ctx;
}

auto new_session(std::shared_ptr<const game_context> ctx, std::string session_id, std::string player_id,
				 int start_level, std::uint64_t seed) -> result<game_state, engine_error>
{
	if (ctx->level(start_level) == nullptr) {
		return fail(engine_error_kind::unknown_level, "no level " + std::to_string(start_level));
	}
	game_state s;
	s.ctx = std::move(ctx);
	s.session_id = std::move(session_id);
	s.player_id = std::move(player_id);
	s.level = start_level;
	s.rng = rng_state{seed, 0};
	reset_level(s);
	return s;
}

auto begin_level(const game_state &s, timestamp at) -> result<game_state, engine_error>
{
	if (s.phase != game_phase::level_intro) {
		return fail(engine_error_kind::illegal_phase, "begin_level needs level_intro");
	}
	if (at < s.last_settled_at) {
		return fail(engine_error_kind::stale_timestamp, "timestamp before the last settled time");
	}
	auto n = s;
	n.last_settled_at = at;
	if (auto r = present(n, at); !r) {
		return unexpected{r.error()};
	}
	return n;
}

auto apply_action(const game_state &s, const player_action &a, timestamp at) -> result<step, engine_error>
{
	if (!running(s.phase)) {
		return fail(engine_error_kind::illegal_phase,
					std::string{to_string(a.kind)} + " is not allowed in " + std::string{to_string(s.phase)});
	}
	const bool quiz_action = a.kind == action_kind::identify_concept;
	if (quiz_action != (s.phase == game_phase::awaiting_concept_id)) {
		return fail(engine_error_kind::illegal_action,
					std::string{to_string(a.kind)} + " is not allowed in " + std::string{to_string(s.phase)});
	}
	if (quiz_action && !a.concept_id) {
		return fail(engine_error_kind::illegal_action, "identify_concept needs a concept");
	}
	if (at < s.last_settled_at) {
		return fail(engine_error_kind::stale_timestamp, "timestamp before the last settled time");
	}

	auto n = s;
	if (settle(n, at)) {
		auto fb = expire(n);
		return step{std::move(n), std::move(fb)};
	}

	result<feedback, engine_error> fb = feedback{};
	switch (a.kind) {
	case action_kind::eat:
	case action_kind::avoid:
		fb = classify(n, a.kind == action_kind::eat, at);
		break;
	case action_kind::ask_shifu:
		fb = ask_shifu(n);
		break;
	case action_kind::identify_concept:
		fb = quiz(n, *a.concept_id, at);
		break;
	}
	if (!fb) {
		return unexpected{fb.error()};
	}
	fb->phase_after = n.phase;
	n.last_feedback = *fb;
	return step{std::move(n), std::move(*fb)};
}

auto tick(const game_state &s, timestamp now) -> tick_result
{
	if (!running(s.phase) || now <= s.last_settled_at) {
		return {s, std::nullopt};
	}
	auto n = s;
	if (settle(n, now)) {
		auto fb = expire(n);
		return {std::move(n), std::move(fb)};
	}
	if (n.bonus_deadline && now > *n.bonus_deadline) {
		n.bonus_deadline.reset();
		auto fb = base_feedback(n, feedback_outcome::bonus_expired);
		fb.phase_after = n.phase;
		n.last_feedback = fb;
		return {std::move(n), std::move(fb)};
	}
	return {std::move(n), std::nullopt};
}

auto advance_level(const game_state &s) -> result<game_state, engine_error>
{
	if (s.phase == game_phase::game_won || (s.phase == game_phase::level_complete && s.level >= s.ctx->final_level())) {
		return fail(engine_error_kind::no_next_level, "final level already completed");
	}
	if (s.phase != game_phase::level_complete) {
		return fail(engine_error_kind::illegal_phase, "advance_level needs level_complete");
	}
	auto n = s;
	n.level++;
	reset_level(n);
	return n;
}

auto retry_level(const game_state &s) -> result<game_state, engine_error>
{
	if (s.phase != game_phase::level_failed) {
		return fail(engine_error_kind::illegal_phase, "retry_level needs level_failed");
	}
	auto n = s;
	reset_level(n);
	return n;
}

}// namespace phinder
