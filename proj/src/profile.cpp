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

#include "phinder/profile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace phinder {

namespace {

auto history_for(player_profile &p, int level) -> level_history &
{
	auto it = std::lower_bound(p.levels.begin(), p.levels.end(), level,
							   [](const level_history &h, int l) { return h.level < l; });
	if (it == p.levels.end() || it->level != level) {
		it = p.levels.insert(it, level_history{level, 0, 0, 0, 0.0});
	}
	return *it;
}

auto is_classification(feedback_outcome o) -> bool
{
	return o == feedback_outcome::correct_eat || o == feedback_outcome::correct_avoid ||
		   o == feedback_outcome::wrong_eat || o == feedback_outcome::wrong_avoid;
}

}// namespace

void record_level_start(player_profile &p, int level)
{
	history_for(p, level).attempts++;
}

void record_feedback(player_profile &p, const std::optional<player_action> &a, const feedback &fb)
{
	p.total_score += fb.points_delta;
	if (fb.medal_awarded) {
		p.medals.push_back({fb.level, fb.worm_id});
	}
	accumulate_stats(p.stats, fb);

	auto &h = history_for(p, fb.level);
	if (is_classification(fb.outcome) && fb.decision_time) {
		/* running mean */
		h.decisions++;
		h.mean_decision_time_ms +=
			(static_cast<double>(fb.decision_time->count()) - h.mean_decision_time_ms) / static_cast<double>(h.decisions);
	}
	if (fb.phase_after == game_phase::level_complete || fb.phase_after == game_phase::game_won) {
		h.completions++;
	}

	training_entry e;
	e.level = fb.level;
	e.worm_id = fb.worm_id;
	e.worm_summary = fb.worm_summary;
	e.action = a ? std::string{to_string(a->kind)} : "tick";
	if (a && a->concept_id) {
		e.action += ":" + std::string{to_string(*a->concept_id)};
	}
	e.outcome = to_string(fb.outcome);
	e.points_delta = fb.points_delta;
	e.advice = fb.advice;
	p.training_log.push_back(std::move(e));
}

auto profile_json(const player_profile &p) -> json
{
	json j;
	j["player_id"] = p.player_id;
	j["total_score"] = p.total_score;
	auto medals = json::array();
	for (const auto &m : p.medals) {
		medals.push_back(json{{"level", m.level}, {"worm_id", m.worm_id}});
	}
	j["medals"] = std::move(medals);
	json stats = json::object();
	for (auto c : all_concepts) {
		auto it = p.stats.find(c);
		concept_stats st = it == p.stats.end() ? concept_stats{} : it->second;
		stats[std::string{to_string(c)}] = json{{"seen", st.seen},
												{"correct_classifications", st.correct_classifications},
												{"correct_identifications", st.correct_identifications}};
	}
	j["per_concept_stats"] = std::move(stats);
	auto levels = json::array();
	for (const auto &h : p.levels) {
		levels.push_back(json{{"level", h.level},
							  {"attempts", h.attempts},
							  {"completions", h.completions},
							  {"decisions", h.decisions},
							  {"mean_decision_time_ms", h.mean_decision_time_ms}});
	}
	j["per_level_history"] = std::move(levels);
	auto log = json::array();
	for (const auto &e : p.training_log) {
		log.push_back(json{{"level", e.level},
						   {"worm_id", e.worm_id},
						   {"worm_summary", e.worm_summary},
						   {"action", e.action},
						   {"outcome", e.outcome},
						   {"points_delta", e.points_delta},
						   {"advice", e.advice}});
	}
	j["training_log"] = std::move(log);
	return j;
}

auto profile_from_json(const json &j) -> result<player_profile, std::string>
{
	try {
		player_profile p;
		p.player_id = j.at("player_id").get<std::string>();
		p.total_score = j.at("total_score").get<std::int64_t>();
		for (const auto &m : j.at("medals")) {
			p.medals.push_back({m.at("level").get<int>(), m.at("worm_id").get<std::string>()});
		}
		for (const auto &[k, v] : j.at("per_concept_stats").items()) {
			auto c = concept_from_string(k);
			if (!c) {
				return unexpected{"unknown concept '" + k + "'"};
			}
			concept_stats st{v.at("seen").get<std::uint64_t>(), v.at("correct_classifications").get<std::uint64_t>(),
							 v.at("correct_identifications").get<std::uint64_t>()};
			if (st != concept_stats{}) {
				p.stats[*c] = st;
			}
		}
		for (const auto &h : j.at("per_level_history")) {
			p.levels.push_back({h.at("level").get<int>(), h.at("attempts").get<std::uint64_t>(),
								h.at("completions").get<std::uint64_t>(), h.at("decisions").get<std::uint64_t>(),
								h.at("mean_decision_time_ms").get<double>()});
		}
		std::sort(p.levels.begin(), p.levels.end(),
				  [](const level_history &a, const level_history &b) { return a.level < b.level; });
		for (const auto &e : j.at("training_log")) {
			p.training_log.push_back({e.at("level").get<int>(), e.at("worm_id").get<std::string>(),
									  e.at("worm_summary").get<std::string>(), e.at("action").get<std::string>(),
									  e.at("outcome").get<std::string>(), e.at("points_delta").get<int>(),
									  e.at("advice").get<std::vector<std::string>>()});
		}
		return p;
	}
	catch (const nlohmann::json::exception &e) {
		return unexpected{std::string{"malformed profile: "} + e.what()};
	}
}

auto load_profile(const std::filesystem::path &file) -> result<player_profile, std::string>
{
	std::ifstream in(file);
	if (!in) {
		return unexpected{"cannot read " + file.string()};
	}
	std::stringstream ss;
	ss << in.rdbuf();
	auto j = json::parse(ss.str(), nullptr, false);
	if (j.is_discarded()) {
		return unexpected{file.string() + ": not valid JSON"};
	}
	return profile_from_json(j);
}

auto save_profile(const player_profile &p, const std::filesystem::path &file) -> result<unit, std::string>
{
	auto tmp = file;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::trunc);
		if (!out) {
			return unexpected{"cannot write " + tmp.string()};
		}
		out << profile_json(p).dump(2) << '\n';
		if (!out) {
			return unexpected{"short write to " + tmp.string()};
		}
	}
	std::error_code ec;
	std::filesystem::rename(tmp, file, ec);
	if (ec) {
		return unexpected{"cannot replace " + file.string() + ": " + ec.message()};
	}
	return unit{};
}

auto progress_report(const player_profile &p, int total_levels) -> progress_summary
{
	progress_summary s;
	s.player_id = p.player_id;
	s.total_levels = total_levels;
	for (const auto &h : p.levels) {
		if (h.completions > 0 && h.level >= 1 && h.level <= total_levels) {
			s.levels_completed++;
		}
	}
	s.levels_remaining = total_levels - s.levels_completed;
	s.journey_position = total_levels > 0 ? static_cast<double>(s.levels_completed) / total_levels : 0.0;
	s.total_score = p.total_score;
	for (auto c : all_concepts) {
		concept_progress cp{c, 0, 0, std::nullopt};
		if (auto it = p.stats.find(c); it != p.stats.end()) {
			cp.seen = it->second.seen;
			cp.correct_identifications = it->second.correct_identifications;
			if (cp.seen > 0) {
				cp.accuracy = static_cast<double>(it->second.correct_classifications) / static_cast<double>(cp.seen);
			}
		}
		s.concepts.push_back(cp);
	}
	s.medals = p.medals;
	return s;
}

auto progress_json(const progress_summary &s) -> json
{
	json j;
	j["player_id"] = s.player_id;
	j["total_levels"] = s.total_levels;
	j["levels_completed"] = s.levels_completed;
	j["levels_remaining"] = s.levels_remaining;
	j["journey_position"] = s.journey_position;
	j["total_score"] = s.total_score;
	auto concepts = json::array();
	for (const auto &c : s.concepts) {
		concepts.push_back(json{{"concept", to_string(c.concept_id)},
								{"seen", c.seen},
								{"correct_identifications", c.correct_identifications},
								{"accuracy", c.accuracy ? json(*c.accuracy) : json(nullptr)},
								{"status", c.accuracy ? "seen" : "not yet seen"}});
	}
	j["per_concept"] = std::move(concepts);
	auto medals = json::array();
	for (const auto &m : s.medals) {
		medals.push_back(json{{"level", m.level}, {"worm_id", m.worm_id}});
	}
	j["medals"] = std::move(medals);
	return j;
}

}// namespace phinder
