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

#include "phinder/codec.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace phinder {

namespace {

auto concepts_json(const concept_set &cs) -> json
{
	auto out = json::array();
	for (auto c : cs) {
		out.push_back(to_string(c));
	}
	return out;
}

auto advice_json(const std::vector<std::string> &advice) -> json
{
	auto out = json::array();
	for (const auto &a : advice) {
		out.push_back(a);
	}
	return out;
}

auto ms(timestamp t) -> std::int64_t
{
	return t.count();
}

template<class T, class F>
auto or_null(const std::optional<T> &v, F &&f) -> json
{
	return v ? json(f(*v)) : json(nullptr);
}

auto stats_json(const concept_stats_map &stats) -> json
{
	json out = json::object();
	for (const auto &[c, st] : stats) {
		out[std::string{to_string(c)}] = json{{"seen", st.seen},
											  {"correct_classifications", st.correct_classifications},
											  {"correct_identifications", st.correct_identifications}};
	}
	return out;
}

auto medals_json(const std::vector<medal> &medals) -> json
{
	auto out = json::array();
	for (const auto &m : medals) {
		out.push_back(json{{"level", m.level}, {"worm_id", m.worm_id}});
	}
	return out;
}

}// namespace

auto report_json(const detection_report &r) -> json
{
	json j;
	j["verdict"] = to_string(r.verdict);
	auto findings = json::array();
	for (const auto &e : r.findings) {
		json f;
		f["concept"] = to_string(e.concept_id);
		f["rule"] = e.rule;
		f["field"] = e.span.field;
		f["start"] = e.span.start;
		f["end"] = e.span.end;
		f["detail"] = e.detail;
		json params = json::object();
		for (const auto &[k, v] : e.params) {
			params[k] = v;
		}
		f["params"] = std::move(params);
		findings.push_back(std::move(f));
	}
	j["findings"] = std::move(findings);
	j["advice"] = advice_json(r.advice);
	return j;
}

auto feedback_json(const feedback &fb) -> json
{
	json j;
	j["outcome"] = to_string(fb.outcome);
	j["quiz_correct"] = fb.quiz_correct;
	j["advice"] = advice_json(fb.advice);
	j["points_delta"] = fb.points_delta;
	j["lives_delta"] = fb.lives_delta;
	j["medal_awarded"] = fb.medal_awarded;
	j["level"] = fb.level;
	j["worm_id"] = fb.worm_id;
	j["worm_summary"] = fb.worm_summary;
	j["revealed_label"] = or_null(fb.revealed_label, [](label l) { return to_string(l); });
	j["revealed_concepts"] = concepts_json(fb.revealed_concepts);
	j["answered"] = or_null(fb.answered, [](phishing_concept c) { return to_string(c); });
	j["decision_time_ms"] = or_null(fb.decision_time, ms);
	j["phase_after"] = to_string(fb.phase_after);
	return j;
}

auto state_json(const game_state &s) -> json
{
	json j;
	j["session_id"] = s.session_id;
	j["player_id"] = s.player_id;
	j["level"] = s.level;
	j["phase"] = to_string(s.phase);
	j["score"] = s.score;
	j["lives"] = s.lives;
	j["level_clock_remaining_ms"] = ms(s.level_clock_remaining);
	j["worms_presented"] = s.worms_presented;
	j["worms_resolved"] = s.worms_resolved;
	j["active_worm"] = s.active_worm ? json::parse(bank_record(*s.active_worm)) : json(nullptr);
	j["bonus_deadline_ms"] = or_null(s.bonus_deadline, ms);
	j["medals"] = medals_json(s.medals);
	j["shifu_advice_pending"] = or_null(s.shifu_advice_pending, report_json);
	j["rng"] = json{{"seed", s.rng.seed}, {"draws", s.rng.draws}};
	j["last_feedback"] = or_null(s.last_feedback, feedback_json);
	j["presented_at_ms"] = ms(s.presented_at);
	j["last_settled_at_ms"] = ms(s.last_settled_at);
	j["wrong_in_level"] = s.wrong_in_level;
	j["correct_classifications"] = s.correct_classifications;
	j["correct_answers"] = s.correct_answers;
	j["stats"] = stats_json(s.stats);
	return j;
}

auto state_digest(const game_state &s) -> std::string
{
	auto text = state_json(s).dump();
	std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
	unsigned int len = 0;
	EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr);
	std::string hex;
	for (unsigned int i = 0; i < 8 && i < len; ++i) {
		std::array<char, 3> buf{};
		std::snprintf(buf.data(), buf.size(), "%02x", md[i]);
		hex += buf.data();
	}
	return hex;
}

auto state_view(const game_state &s) -> json
{
	const auto &cfg = s.level_cfg();
	json j;
	j["session_id"] = s.session_id;
	j["player_id"] = s.player_id;
	j["level"] = s.level;
	j["total_levels"] = s.ctx->final_level();
	j["phase"] = to_string(s.phase);
	j["score"] = s.score;
	j["lives"] = s.lives;
	/* Whole seconds rounded up, so a fresh level 1 reads 600 */
	j["clock"] = (s.level_clock_remaining.count() + 999) / 1000;
	j["clock_ms"] = ms(s.level_clock_remaining);
	j["worm_count"] = cfg.worm_count;
	j["worms_presented"] = s.worms_presented;
	j["worms_resolved"] = s.worms_resolved;
	if (s.active_worm) {
		const auto &w = *s.active_worm;
		json aw;
		aw["id"] = w.id();
		aw["kind"] = w.is_email() ? "email" : "url";
		aw["text"] = w.display_text();
		aw["bonus"] = w.bonus();
		aw["bonus_remaining_ms"] =
			or_null(s.bonus_deadline, [&](timestamp d) { return std::max<std::int64_t>(0, ms(d - s.last_settled_at)); });
		j["active_worm"] = std::move(aw);
	}
	else {
		j["active_worm"] = nullptr;
	}
	j["shifu_advice"] = s.shifu_advice_pending ? advice_json(s.shifu_advice_pending->advice.empty()
																  ? std::vector<std::string>{no_issues_advice()}
																  : s.shifu_advice_pending->advice)
											   : json(nullptr);
	if (s.phase == game_phase::awaiting_concept_id) {
		json q;
		q["prompt"] = "Well done! What made you avoid this worm?";
		auto options = json::array();
		for (const auto &d : concept_catalog()) {
			options.push_back(json{{"id", to_string(d.id)}, {"description", d.description}});
		}
		q["options"] = std::move(options);
		j["quiz"] = std::move(q);
	}
	else {
		j["quiz"] = nullptr;
	}
	j["medals"] = medals_json(s.medals);
	if (s.last_feedback) {
		const auto &fb = *s.last_feedback;
		j["last_outcome"] = json{{"outcome", to_string(fb.outcome)},
								 {"worm_id", fb.worm_id},
								 {"points_delta", fb.points_delta},
								 {"lives_delta", fb.lives_delta},
								 {"medal_awarded", fb.medal_awarded},
								 {"quiz_correct", fb.quiz_correct}};
	}
	else {
		j["last_outcome"] = nullptr;
	}
	return j;
}

auto feedback_view(const feedback &fb) -> json
{
	json j;
	j["outcome"] = to_string(fb.outcome);
	j["worm_id"] = fb.worm_id;
	j["level"] = fb.level;
	j["advice"] = advice_json(fb.advice);
	j["points_delta"] = fb.points_delta;
	j["lives_delta"] = fb.lives_delta;
	j["medal_awarded"] = fb.medal_awarded;
	if (fb.outcome == feedback_outcome::quiz_result) {
		j["quiz_correct"] = fb.quiz_correct;
		j["answered"] = or_null(fb.answered, [](phishing_concept c) { return to_string(c); });
	}
	if (fb.revealed_label && fb.phase_after != game_phase::awaiting_concept_id) {
		j["resolved"] = json{{"label", to_string(*fb.revealed_label)}, {"concepts", concepts_json(fb.revealed_concepts)}};
	}
	j["phase_after"] = to_string(fb.phase_after);
	return j;
}

auto action_json(const player_action &a) -> json
{
	json j;
	j["action"] = to_string(a.kind);
	if (a.concept_id) {
		j["concept"] = to_string(*a.concept_id);
	}
	return j;
}

auto action_from_json(const json &j) -> result<player_action, std::string>
{
	if (!j.is_object() || !j.contains("action") || !j["action"].is_string()) {
		return unexpected{std::string{"expected {\"action\": ...}"}};
	}
	auto kind = action_from_string(j["action"].get<std::string>());
	if (!kind) {
		return unexpected{"unknown action '" + j["action"].get<std::string>() + "'"};
	}
	player_action a{*kind, std::nullopt};
	if (j.contains("concept")) {
		if (!j["concept"].is_string()) {
			return unexpected{std::string{"concept must be a string"}};
		}
		auto c = concept_from_string(j["concept"].get<std::string>());
		if (!c) {
			return unexpected{"unknown concept '" + j["concept"].get<std::string>() + "'"};
		}
		a.concept_id = c;
	}
	return a;
}

}// namespace phinder
