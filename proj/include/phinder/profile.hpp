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

/*
 * Long-lived player record. Counters only grow and the training log is
 * append-only; the on-disk form is JSON with a fixed field order.
 */

#ifndef PHINDER_PROFILE_HPP
#define PHINDER_PROFILE_HPP

#include "phinder/codec.hpp"
#include "phinder/engine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phinder {

struct level_history {
	int level = 0;
	std::uint64_t attempts = 0;
	std::uint64_t completions = 0;
	std::uint64_t decisions = 0;
	double mean_decision_time_ms = 0.0;
};

struct training_entry {
	int level = 0;
	std::string worm_id;
	std::string worm_summary;
	std::string action;
	std::string outcome;
	int points_delta = 0;
	std::vector<std::string> advice;
};

struct player_profile {
	std::string player_id;
	std::int64_t total_score = 0;
	std::vector<medal> medals;
	concept_stats_map stats;
	/* Sorted by level */
	std::vector<level_history> levels;
	std::vector<training_entry> training_log;
};

void record_level_start(player_profile &p, int level);
/* `a` is empty for feedback produced by a tick. */
void record_feedback(player_profile &p, const std::optional<player_action> &a, const feedback &fb);

auto profile_json(const player_profile &p) -> json;
auto profile_from_json(const json &j) -> result<player_profile, std::string>;
auto load_profile(const std::filesystem::path &file) -> result<player_profile, std::string>;
/* Writes a sibling temporary and renames it over the target. */
auto save_profile(const player_profile &p, const std::filesystem::path &file) -> result<unit, std::string>;

struct concept_progress {
	phishing_concept concept_id;
	std::uint64_t seen = 0;
	std::uint64_t correct_identifications = 0;
	/* Empty until the concept has been seen */
	std::optional<double> accuracy;
};

struct progress_summary {
	std::string player_id;
	int total_levels = 0;
	int levels_completed = 0;
	int levels_remaining = 0;
	double journey_position = 0.0;
	std::int64_t total_score = 0;
	std::vector<concept_progress> concepts;
	std::vector<medal> medals;
};

auto progress_report(const player_profile &p, int total_levels = 5) -> progress_summary;
auto progress_json(const progress_summary &s) -> json;

}// namespace phinder

#endif
