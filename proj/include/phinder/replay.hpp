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
 * Session replay logs: one JSON object per line, each carrying the digest of
 * the state it produced. A session header is followed by begin_level,
 * action, tick, advance and retry records. Ticks are logged only when they
 * change more than the clock, because plain clock settling is additive and
 * replays identically from the next record.
 */

#ifndef PHINDER_REPLAY_HPP
#define PHINDER_REPLAY_HPP

#include "phinder/codec.hpp"
#include "phinder/engine.hpp"

#include <functional>
#include <istream>
#include <string>
#include <vector>

namespace phinder {

class recorded_session {
public:
	using sink = std::function<void(const std::string &line)>;

	static auto start(std::shared_ptr<const game_context> ctx, std::string session_id, std::string player_id,
					  int start_level, std::uint64_t seed, sink out) -> result<recorded_session, engine_error>;

	/* Continues a replayed session, appending to `out`. */
	static auto resume(game_state s, sink out) -> recorded_session { return {std::move(s), std::move(out)}; }

	[[nodiscard]] auto state() const -> const game_state & { return state_; }

	auto begin(timestamp at) -> result<unit, engine_error>;
	auto act(const player_action &a, timestamp at) -> result<feedback, engine_error>;
	/* Logged when it produced feedback, or always with `record` set. */
	auto tick(timestamp now, bool record = false) -> std::optional<feedback>;
	auto advance() -> result<unit, engine_error>;
	auto retry() -> result<unit, engine_error>;

private:
	recorded_session(game_state s, sink out)
		: state_(std::move(s)), sink_(std::move(out))
	{
	}
	void emit(json record);

	game_state state_;
	sink sink_;
};

struct divergence {
	std::size_t line = 0;
	std::string expected;
	std::string actual;
	std::string note;
};

struct replay_report {
	game_state final_state;
	std::size_t records = 0;
	std::vector<divergence> divergences;
};

/* Re-executes a log against `ctx`; a malformed log is an error, a differing digest a divergence. */
auto replay_log(std::shared_ptr<const game_context> ctx, std::istream &in) -> result<replay_report, std::string>;

}// namespace phinder

#endif
