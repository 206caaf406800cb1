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
 * Session hosting. session_hub owns sessions, profiles and replay logs and
 * answers the /v1 routes as (status, JSON) pairs; the Beast server in
 * server.hpp only moves bytes. Time comes from an injectable clock so tests
 * can drive it.
 */

#ifndef PHINDER_SERVICE_HPP
#define PHINDER_SERVICE_HPP

#include "phinder/codec.hpp"
#include "phinder/engine.hpp"
#include "phinder/profile.hpp"
#include "phinder/replay.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

namespace phinder {

struct service_config {
	std::string host = "127.0.0.1";
	unsigned short port = 8080;
	std::filesystem::path data_dir = "phinder-data";
	std::optional<std::filesystem::path> corpus_path;
	std::optional<std::filesystem::path> rules_path;
	std::optional<std::filesystem::path> levels_path;
	std::optional<std::filesystem::path> web_root;
	std::chrono::milliseconds idle_suspend = std::chrono::minutes{30};
	std::chrono::milliseconds tick_interval{1000};
	unsigned threads = 2;
};

using env_lookup = std::function<std::optional<std::string>(const char *)>;

auto process_env() -> env_lookup;

/*
 * Keys: listen (host:port), data_dir, corpus, rules, levels, web_root,
 * idle_minutes, tick_ms, threads. PHINDER_ADDR and PHINDER_DATA override
 * listen and data_dir. Relative paths resolve against the file's directory.
 */
auto load_service_config(const std::optional<std::filesystem::path> &file, const env_lookup &env)
	-> result<service_config, std::string>;

/* Game context from the configured corpus, rules/brands and level files. */
auto build_context(const service_config &cfg) -> result<std::shared_ptr<const game_context>, std::string>;

struct reply {
	unsigned status = 200;
	json body;
};

class session_hub {
public:
	/* Server wall time in milliseconds; authoritative for every engine call. */
	using clock_fn = std::function<timestamp()>;
	using frame_fn = std::function<void(const std::string &frame)>;

	session_hub(std::shared_ptr<const game_context> ctx, std::filesystem::path data_dir, clock_fn clock,
				std::chrono::milliseconds idle_suspend = std::chrono::minutes{30});
	~session_hub();
	session_hub(const session_hub &) = delete;
	auto operator=(const session_hub &) -> session_hub & = delete;

	/* Dispatches "GET"/"POST" on a /v1 target. */
	auto route(std::string_view method, std::string_view target, std::string_view body) -> reply;

	auto create_session(const json &body) -> reply;
	auto get_state(const std::string &id) -> reply;
	auto submit_action(const std::string &id, const json &body) -> reply;
	auto get_progress(const std::string &player) -> reply;

	/* Sends the current frame at once, then every change. Empty when the session is unknown. */
	auto subscribe(const std::string &id, frame_fn fn) -> std::optional<std::uint64_t>;
	void unsubscribe(const std::string &id, std::uint64_t token);

	/* Settles every live session; pushes frames that changed. */
	void tick_all();
	/* Writes changed profiles; tick_all, suspend_idle and the destructor call it. */
	void flush_profiles();
	/* Moves sessions idle past the limit to disk; returns how many. */
	auto suspend_idle() -> std::size_t;

	/* Authoritative state, for tests and tools. */
	auto peek(const std::string &id) -> std::optional<game_state>;
	[[nodiscard]] auto live_sessions() const -> std::size_t;

	static auto is_session_route(std::string_view target) -> std::optional<std::string>;

private:
	struct entry;

	auto find(const std::string &id) -> std::shared_ptr<entry>;
	auto resume(const std::string &id) -> std::shared_ptr<entry>;
	auto engine_now(entry &e) -> timestamp;
	void push(entry &e, const std::optional<feedback> &fb, bool force);
	auto update_profile(const std::string &player, const std::function<void(player_profile &)> &fn) -> bool;
	auto profile_path(const std::string &player) const -> std::filesystem::path;
	auto log_path(const std::string &id) const -> std::filesystem::path;

	std::shared_ptr<const game_context> ctx_;
	std::filesystem::path data_dir_;
	clock_fn clock_;
	std::chrono::milliseconds idle_suspend_;

	mutable std::mutex sessions_mutex_;
	std::map<std::string, std::shared_ptr<entry>> sessions_;
	std::mutex profiles_mutex_;
	std::map<std::string, player_profile> profiles_;
	std::set<std::string> dirty_profiles_;
	std::uint64_t next_token_ = 1;
};

}// namespace phinder

#endif
