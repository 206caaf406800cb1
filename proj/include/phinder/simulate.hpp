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
 * Headless play: a policy drives the engine directly, without the network
 * layer, and every step goes through a recorded_session so the run can be
 * replayed.
 */

#ifndef PHINDER_SIMULATE_HPP
#define PHINDER_SIMULATE_HPP

#include "phinder/replay.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace phinder {

enum class policy_kind : std::uint8_t {
	/* classifies by the detector verdict, answers the first intended concept */
	oracle,
	/* correct with a fixed probability */
	random,
	/* per-concept probability of a correct decision */
	skill,
};

struct policy_spec {
	policy_kind kind = policy_kind::oracle;
	double accuracy = 0.5;
	std::map<phishing_concept, double> skill;
	std::uint64_t seed = 0;

	[[nodiscard]] auto validate() const -> std::string;
};

/* "oracle", "random", "random:0.7", "skill:lookalike_domain=0.9,malicious_url=0.4" */
auto parse_policy(std::string_view text) -> result<policy_spec, std::string>;

class policy {
public:
	explicit policy(policy_spec spec);

	auto decide(const game_state &s) -> player_action;

private:
	auto correct_with(double p) -> bool;
	auto accuracy_for(const worm &w) const -> double;

	policy_spec spec_;
	std::mt19937_64 rng_;
};

struct level_row {
	int level = 0;
	int attempts = 0;
	std::int64_t score = 0;
	int lives_lost = 0;
	int timeouts = 0;
	int medals = 0;
	int worms = 0;
	int phishing = 0;
	std::string result;
};

struct simulation_options {
	policy_spec policy;
	int levels = 5;
	std::uint64_t seed = 0;
	int start_level = 1;
	/* Delay between presentation and each action */
	timestamp think_time{0};
	int max_attempts = 3;
	recorded_session::sink log;
};

struct simulation_result {
	std::vector<level_row> rows;
	game_state final_state;
	std::int64_t total_score = 0;
	int decisions = 0;
	int wrong_decisions = 0;
};

auto simulate(std::shared_ptr<const game_context> ctx, const simulation_options &opts)
	-> result<simulation_result, engine_error>;

}// namespace phinder

#endif
