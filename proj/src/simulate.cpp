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

#include "phinder/simulate.hpp"

#include "text.hpp"

#include <charconv>
#include <numeric>

namespace phinder {

namespace {

auto parse_probability(std::string_view s) -> std::optional<double>
{
	double v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0.0 || v > 1.0) {
		return std::nullopt;
	}
	return v;
}

/* Uniform in [0,1) from 53 random bits; std distributions differ between libraries. */
auto unit_draw(std::mt19937_64 &rng) -> double
{
	return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

}// namespace

auto policy_spec::validate() const -> std::string
{
	if (accuracy < 0.0 || accuracy > 1.0) {
		return "accuracy must be within [0,1]";
	}
	for (const auto &[c, p] : skill) {
		if (p < 0.0 || p > 1.0) {
			return "accuracy for " + std::string{to_string(c)} + " must be within [0,1]";
		}
	}
	if (kind == policy_kind::skill && skill.empty()) {
		return "skill policy needs at least one concept";
	}
	return {};
}

auto parse_policy(std::string_view text) -> result<policy_spec, std::string>
{
	policy_spec spec;
	auto colon = text.find(':');
	auto name = text.substr(0, colon);
	auto args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

	if (name == "oracle" && args.empty()) {
		spec.kind = policy_kind::oracle;
	}
	else if (name == "random") {
		spec.kind = policy_kind::random;
		if (!args.empty()) {
			auto p = parse_probability(args);
			if (!p) {
				return unexpected{"bad accuracy '" + std::string{args} + "'"};
			}
			spec.accuracy = *p;
		}
	}
	else if (name == "skill") {
		spec.kind = policy_kind::skill;
		for (const auto &item : text::split(args, ',')) {
			auto part = text::trim(item);
			auto eq = part.find('=');
			if (eq == std::string_view::npos) {
				return unexpected{"expected concept=accuracy, got '" + std::string{part} + "'"};
			}
			auto c = concept_from_string(text::trim(part.substr(0, eq)));
			auto p = parse_probability(text::trim(part.substr(eq + 1)));
			if (!c || !p) {
				return unexpected{"bad skill entry '" + std::string{part} + "'"};
			}
			spec.skill[*c] = *p;
		}
	}
	else {
		return unexpected{"unknown policy '" + std::string{text} + "'"};
	}
	if (auto why = spec.validate(); !why.empty()) {
		return unexpected{why};
	}
	return spec;
}

policy::policy(policy_spec spec)
	: spec_(std::move(spec)), rng_(spec_.seed)
{
}

auto policy::correct_with(double p) -> bool
{
	return unit_draw(rng_) < p;
}

auto policy::accuracy_for(const worm &w) const -> double
{
	if (spec_.kind == policy_kind::random) {
		return spec_.accuracy;
	}
	auto lookup = [&](phishing_concept c) {
		auto it = spec_.skill.find(c);
		return it == spec_.skill.end() ? 0.5 : it->second;
	};
	if (w.intended_concepts().empty()) {
		/* legitimate worms: the player's overall skill */
		double sum = 0;
		for (const auto &[c, p] : spec_.skill) {
			sum += p;
		}
		return spec_.skill.empty() ? 0.5 : sum / static_cast<double>(spec_.skill.size());
	}
	double sum = 0;
	for (auto c : w.intended_concepts()) {
		sum += lookup(c);
	}
	return sum / static_cast<double>(w.intended_concepts().size());
}

auto policy::decide(const game_state &s) -> player_action
{
	const auto &w = *s.active_worm;
	const bool phishing = w.ground_truth() == label::phishing;

	if (s.phase == game_phase::awaiting_concept_id) {
		auto first = *w.intended_concepts().begin();
		if (spec_.kind == policy_kind::oracle ||
			(spec_.kind == policy_kind::skill && correct_with(accuracy_for(w)))) {
			return player_action::identify(first);
		}
		return player_action::identify(all_concepts[rng_() % all_concepts.size()]);
	}

	bool say_phishing;
	if (spec_.kind == policy_kind::oracle) {
		say_phishing = s.active_report->verdict == label::phishing;
	}
	else {
		say_phishing = correct_with(accuracy_for(w)) ? phishing : !phishing;
	}
	return say_phishing ? player_action::avoid() : player_action::eat();
}

auto simulate(std::shared_ptr<const game_context> ctx, const simulation_options &opts)
	-> result<simulation_result, engine_error>
{
	if (auto why = opts.policy.validate(); !why.empty()) {
		return unexpected{engine_error{engine_error_kind::illegal_action, why}};
	}
	const int last_level = opts.start_level + opts.levels - 1;
	if (opts.levels < 1 || ctx->level(last_level) == nullptr) {
		return unexpected{engine_error{engine_error_kind::unknown_level, "no level " + std::to_string(last_level)}};
	}
	auto session = recorded_session::start(ctx, "sim-" + std::to_string(opts.seed), "simulator", opts.start_level,
										   opts.seed, opts.log);
	if (!session) {
		return unexpected{session.error()};
	}
	policy player{opts.policy};
	simulation_result out;
	timestamp now{0};

	while (true) {
		const int level = session->state().level;
		if (out.rows.empty() || out.rows.back().level != level) {
			level_row fresh;
			fresh.level = level;
			out.rows.push_back(fresh);
		}
		auto &row = out.rows.back();
		row.attempts++;
		if (auto r = session->begin(now); !r) {
			return unexpected{r.error()};
		}

		while (session->state().phase == game_phase::awaiting_decision ||
			   session->state().phase == game_phase::awaiting_concept_id) {
			now += opts.think_time;
			if (auto fb = session->tick(now); fb && fb->outcome == feedback_outcome::time_expired) {
				break;
			}
			auto action = player.decide(session->state());
			auto fb = session->act(action, now);
			if (!fb) {
				return unexpected{fb.error()};
			}
			row.score += fb->points_delta;
			row.lives_lost -= fb->lives_delta;
			row.medals += fb->medal_awarded ? 1 : 0;
			if (fb->revealed_label && fb->outcome != feedback_outcome::quiz_result) {
				row.worms++;
				out.decisions++;
				if (fb->lives_delta < 0) {
					out.wrong_decisions++;
				}
				if (*fb->revealed_label == label::phishing) {
					row.phishing++;
				}
			}
		}

		const auto phase = session->state().phase;
		if (phase == game_phase::level_failed) {
			row.timeouts++;
			row.result = "timeout";
			if (row.attempts >= opts.max_attempts) {
				break;
			}
			if (auto r = session->retry(); !r) {
				return unexpected{r.error()};
			}
			continue;
		}
		if (phase == game_phase::game_over) {
			row.result = "game_over";
			break;
		}
		if (phase == game_phase::game_won) {
			row.result = "won";
			break;
		}
		row.result = "complete";
		if (level >= last_level) {
			break;
		}
		if (auto r = session->advance(); !r) {
			return unexpected{r.error()};
		}
	}

	out.final_state = session->state();
	out.total_score = out.final_state.score;
	return out;
}

}// namespace phinder
