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
 * The game state machine. States are values: every operation takes a state
 * and returns a new one, so a session is just a fold over timestamped
 * inputs. Time always comes from the caller.
 */

#ifndef PHINDER_ENGINE_HPP
#define PHINDER_ENGINE_HPP

#include "phinder/detector.hpp"
#include "phinder/generator.hpp"
#include "phinder/model.hpp"
#include "phinder/result.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace phinder {

/* Milliseconds on whatever monotone clock the caller uses. */
using timestamp = std::chrono::milliseconds;

struct game_rules {
	int points_per_classification = 100;
	int points_per_quiz_answer = 50;
	int lives_per_level = 5;
	std::chrono::seconds shifu_cost{60};
};

/* Everything a session needs besides its own state; shared and immutable. */
struct game_context {
	std::vector<level_config> levels;
	corpus items;
	brand_directory brands;
	rule_config rules;
	game_rules scoring;

	[[nodiscard]] auto level(int n) const -> const level_config *;
	[[nodiscard]] auto final_level() const -> int { return static_cast<int>(levels.size()); }
};

enum class engine_error_kind : std::uint8_t {
	unknown_level,
	invalid_corpus,
	illegal_phase,
	illegal_action,
	stale_timestamp,
	no_next_level,
	generation_failed,
};

struct engine_error {
	engine_error_kind kind;
	std::string message;
};

auto to_string(engine_error_kind k) -> std::string_view;

/* Validates levels and corpus; an unclean corpus is rejected. */
auto make_context(std::vector<level_config> levels, corpus items, brand_directory brands, rule_config rules,
				  game_rules scoring = {}) -> result<std::shared_ptr<const game_context>, engine_error>;

/* Default ladder, bundled corpus, default brands and rules. */
auto default_context() -> std::shared_ptr<const game_context>;

enum class game_phase : std::uint8_t {
	level_intro,
	awaiting_decision,
	awaiting_concept_id,
	/* Never entered: feedback travels with the step result instead */
	feedback,
	level_complete,
	level_failed,
	game_won,
	game_over,
};

auto to_string(game_phase p) -> std::string_view;

enum class action_kind : std::uint8_t {
	eat,
	avoid,
	ask_shifu,
	identify_concept,
};

struct player_action {
	action_kind kind;
	std::optional<phishing_concept> concept_id;

	static auto eat() -> player_action { return {action_kind::eat, std::nullopt}; }
	static auto avoid() -> player_action { return {action_kind::avoid, std::nullopt}; }
	static auto ask_shifu() -> player_action { return {action_kind::ask_shifu, std::nullopt}; }
	static auto identify(phishing_concept c) -> player_action { return {action_kind::identify_concept, c}; }
};

auto to_string(action_kind k) -> std::string_view;
auto action_from_string(std::string_view s) -> std::optional<action_kind>;

enum class feedback_outcome : std::uint8_t {
	correct_eat,
	correct_avoid,
	wrong_eat,
	wrong_avoid,
	shifu_advice,
	quiz_result,
	bonus_expired,
	/* The level clock ran out before the action (or at a tick) */
	time_expired,
};

auto to_string(feedback_outcome o) -> std::string_view;

struct feedback {
	feedback_outcome outcome;
	bool quiz_correct = false;
	std::vector<std::string> advice;
	int points_delta = 0;
	int lives_delta = 0;
	bool medal_awarded = false;

	/* Context for profiles and logs */
	int level = 0;
	std::string worm_id;
	std::string worm_summary;
	/* Only set once the worm is resolved */
	std::optional<label> revealed_label;
	concept_set revealed_concepts;
	std::optional<phishing_concept> answered;
	std::optional<timestamp> decision_time;
	game_phase phase_after = game_phase::level_intro;
};

struct medal {
	int level = 0;
	std::string worm_id;
	friend auto operator==(const medal &, const medal &) -> bool = default;
};

struct concept_stats {
	std::uint64_t seen = 0;
	std::uint64_t correct_classifications = 0;
	std::uint64_t correct_identifications = 0;
	friend auto operator==(const concept_stats &, const concept_stats &) -> bool = default;
};

using concept_stats_map = std::map<phishing_concept, concept_stats>;

/* Folds one feedback into per-concept counters; shared by sessions and profiles. */
void accumulate_stats(concept_stats_map &stats, const feedback &fb);

struct game_state {
	std::shared_ptr<const game_context> ctx;

	std::string session_id;
	std::string player_id;
	int level = 1;
	game_phase phase = game_phase::level_intro;
	std::int64_t score = 0;
	int lives = 5;
	timestamp level_clock_remaining{0};
	int worms_presented = 0;
	int worms_resolved = 0;
	std::optional<worm> active_worm;
	std::optional<timestamp> bonus_deadline;
	std::vector<medal> medals;
	std::optional<detection_report> shifu_advice_pending;
	rng_state rng;
	std::optional<feedback> last_feedback;

	/* Bookkeeping */
	timestamp presented_at{0};
	timestamp last_settled_at{0};
	std::optional<detection_report> active_report;
	int wrong_in_level = 0;
	std::uint64_t correct_classifications = 0;
	std::uint64_t correct_answers = 0;
	concept_stats_map stats;

	[[nodiscard]] auto level_cfg() const -> const level_config & { return *ctx->level(level); }
	[[nodiscard]] auto is_terminal() const -> bool
	{
		return phase == game_phase::game_won || phase == game_phase::game_over;
	}
};

auto new_session(std::shared_ptr<const game_context> ctx, std::string session_id, std::string player_id,
				 int start_level, std::uint64_t seed) -> result<game_state, engine_error>;

/* Presents the first worm of the level; the level clock starts at `at`. */
auto begin_level(const game_state &s, timestamp at) -> result<game_state, engine_error>;

struct step {
	game_state state;
	feedback fb;
};

auto apply_action(const game_state &s, const player_action &a, timestamp at) -> result<step, engine_error>;

struct tick_result {
	game_state state;
	std::optional<feedback> fb;
};

/* Settles clocks; a `now` before the last settle is a no-op. */
auto tick(const game_state &s, timestamp now) -> tick_result;

auto advance_level(const game_state &s) -> result<game_state, engine_error>;

/* From LevelFailed: same level, fresh clock and lives, new worms. */
auto retry_level(const game_state &s) -> result<game_state, engine_error>;

}// namespace phinder

#endif
