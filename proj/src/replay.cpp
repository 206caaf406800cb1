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

#include "phinder/replay.hpp"

namespace phinder {

auto recorded_session::start(std::shared_ptr<const game_context> ctx, std::string session_id,
							 std::string player_id, int start_level, std::uint64_t seed, sink out)
	-> result<recorded_session, engine_error>
{
	auto s = new_session(std::move(ctx), std::move(session_id), std::move(player_id), start_level, seed);
	if (!s) {
		return unexpected{s.error()};
	}
	recorded_session rs{std::move(*s), std::move(out)};
	json header;
	header["type"] = "session";
	header["session_id"] = rs.state_.session_id;
	header["player_id"] = rs.state_.player_id;
	header["seed"] = seed;
	header["start_level"] = start_level;
	rs.emit(std::move(header));
	return rs;
}

void recorded_session::emit(json record)
{
	record["digest"] = state_digest(state_);
	if (sink_) {
		sink_(record.dump());
	}
}

auto recorded_session::begin(timestamp at) -> result<unit, engine_error>
{
	auto n = begin_level(state_, at);
	if (!n) {
		return unexpected{n.error()};
	}
	state_ = std::move(*n);
	emit(json{{"type", "begin_level"}, {"at_ms", at.count()}});
	return unit{};
}

auto recorded_session::act(const player_action &a, timestamp at) -> result<feedback, engine_error>
{
	auto r = apply_action(state_, a, at);
	if (!r) {
		return unexpected{r.error()};
	}
	state_ = std::move(r->state);
	json rec{{"type", "action"}, {"at_ms", at.count()}};
	rec.update(action_json(a));
	rec["outcome"] = to_string(r->fb.outcome);
	rec["points_delta"] = r->fb.points_delta;
	rec["lives_delta"] = r->fb.lives_delta;
	emit(std::move(rec));
	return std::move(r->fb);
}

auto recorded_session::tick(timestamp now, bool record) -> std::optional<feedback>
{
	auto r = phinder::tick(state_, now);
	state_ = std::move(r.state);
	if (r.fb || record) {
		emit(json{{"type", "tick"},
				  {"at_ms", now.count()},
				  {"outcome", r.fb ? json(to_string(r.fb->outcome)) : json(nullptr)}});
	}
	return r.fb;
}

auto recorded_session::advance() -> result<unit, engine_error>
{
	auto n = advance_level(state_);
	if (!n) {
		return unexpected{n.error()};
	}
	state_ = std::move(*n);
	emit(json{{"type", "advance"}});
	return unit{};
}

auto recorded_session::retry() -> result<unit, engine_error>
{
	auto n = retry_level(state_);
	if (!n) {
		return unexpected{n.error()};
	}
	state_ = std::move(*n);
	emit(json{{"type", "retry"}});
	return unit{};
}

auto replay_log(std::shared_ptr<const game_context> ctx, std::istream &in) -> result<replay_report, std::string>
{
	std::string line;
	std::size_t lineno = 0;
	std::optional<game_state> state;
	replay_report report;

	auto where = [&] { return "line " + std::to_string(lineno) + ": "; };

	while (std::getline(in, line)) {
		++lineno;
		if (line.empty()) {
			continue;
		}
		auto rec = json::parse(line, nullptr, false);
		if (rec.is_discarded() || !rec.is_object() || !rec.contains("type") || !rec.contains("digest")) {
			return unexpected{where() + "malformed record"};
		}
		auto type = rec["type"].get<std::string>();
		std::optional<engine_error> failure;
		try {
			if (type == "session") {
				if (state) {
					return unexpected{where() + "second session header"};
				}
				auto s = new_session(ctx, rec.at("session_id").get<std::string>(), rec.at("player_id").get<std::string>(),
									 rec.at("start_level").get<int>(), rec.at("seed").get<std::uint64_t>());
				if (!s) {
					return unexpected{where() + s.error().message};
				}
				state = std::move(*s);
			}
			else if (!state) {
				return unexpected{where() + "record before the session header"};
			}
			else if (type == "begin_level") {
				auto n = begin_level(*state, timestamp{rec.at("at_ms").get<std::int64_t>()});
				n ? void(state = std::move(*n)) : void(failure = n.error());
			}
			else if (type == "action") {
				auto a = action_from_json(rec);
				if (!a) {
					return unexpected{where() + a.error()};
				}
				auto r = apply_action(*state, *a, timestamp{rec.at("at_ms").get<std::int64_t>()});
				r ? void(state = std::move(r->state)) : void(failure = r.error());
			}
			else if (type == "tick") {
				state = phinder::tick(*state, timestamp{rec.at("at_ms").get<std::int64_t>()}).state;
			}
			else if (type == "advance") {
				auto n = advance_level(*state);
				n ? void(state = std::move(*n)) : void(failure = n.error());
			}
			else if (type == "retry") {
				auto n = retry_level(*state);
				n ? void(state = std::move(*n)) : void(failure = n.error());
			}
			else {
				return unexpected{where() + "unknown record type '" + type + "'"};
			}
		}
		catch (const nlohmann::json::exception &e) {
			return unexpected{where() + e.what()};
		}

		report.records++;
		auto expected = rec["digest"].get<std::string>();
		auto actual = state_digest(*state);
		if (failure || expected != actual) {
			report.divergences.push_back(
				{lineno, expected, actual, failure ? std::string{to_string(failure->kind)} + ": " + failure->message : ""});
		}
	}
	if (!state) {
		return unexpected{std::string{"log has no session header"}};
	}
	report.final_state = std::move(*state);
	return report;
}

}// namespace phinder
