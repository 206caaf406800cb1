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

#include "phinder/service.hpp"

#include "phinder/config.hpp"
#include "phinder/generator.hpp"
#include "text.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <random>

namespace phinder {

namespace fs = std::filesystem;

namespace {

auto error_reply(unsigned status, std::string_view code, std::string message) -> reply
{
	return reply{status, json{{"error", code}, {"message", std::move(message)}}};
}

/* Player ids double as file names. */
auto valid_player(std::string_view s) -> bool
{
	if (s.empty() || s.size() > 64 || s.front() == '.') {
		return false;
	}
	return std::all_of(s.begin(), s.end(),
					   [](char c) { return text::is_alnum(c) || c == '_' || c == '-' || c == '.'; });
}

auto valid_session_id(std::string_view s) -> bool
{
	return s.size() == 32 && std::all_of(s.begin(), s.end(), [](char c) {
			   return text::is_digit(c) || (c >= 'a' && c <= 'f');
		   });
}

auto random_u64() -> std::uint64_t
{
	static std::mutex m;
	static std::random_device rd;
	std::lock_guard lock(m);
	return (static_cast<std::uint64_t>(rd()) << 32U) ^ rd();
}

auto random_session_id() -> std::string
{
	static constexpr char hex[] = "0123456789abcdef";
	std::string id;
	for (int part = 0; part < 2; ++part) {
		auto v = random_u64();
		for (int i = 0; i < 16; ++i) {
			id += hex[(v >> (4U * i)) & 0xfU];
		}
	}
	return id;
}

auto parse_port(std::string_view s) -> std::optional<unsigned short>
{
	unsigned v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size() || v > 65535) {
		return std::nullopt;
	}
	return static_cast<unsigned short>(v);
}

auto parse_listen(std::string_view s, service_config &cfg) -> bool
{
	auto colon = s.rfind(':');
	if (colon == std::string_view::npos) {
		return false;
	}
	auto port = parse_port(s.substr(colon + 1));
	if (!port) {
		return false;
	}
	if (colon > 0) {
		cfg.host = std::string{s.substr(0, colon)};
	}
	cfg.port = *port;
	return true;
}

auto parse_count(std::string_view s) -> std::optional<long>
{
	long v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
		return std::nullopt;
	}
	return v;
}

const std::string control_begin = "begin_level";
const std::string control_advance = "advance_level";
const std::string control_retry = "retry_level";

}// namespace

auto process_env() -> env_lookup
{
	return [](const char *name) -> std::optional<std::string> {
		if (const char *v = std::getenv(name)) {
			return std::string{v};
		}
		return std::nullopt;
	};
}

auto load_service_config(const std::optional<fs::path> &file, const env_lookup &env)
	-> result<service_config, std::string>
{
	service_config cfg;
	if (file) {
		auto kv = key_values::load(*file);
		if (!kv) {
			return unexpected{file->string() + ":" + std::to_string(kv.error().line) + ": " + kv.error().message};
		}
		auto base = file->parent_path();
		auto path_of = [&](const std::string &key) -> std::optional<fs::path> {
			auto v = kv->get(key);
			if (!v) {
				return std::nullopt;
			}
			fs::path p{*v};
			return p.is_absolute() ? p : base / p;
		};
		if (auto v = kv->get("listen"); v && !parse_listen(*v, cfg)) {
			return unexpected{"listen must be host:port, got '" + *v + "'"};
		}
		if (auto p = path_of("data_dir")) {
			cfg.data_dir = *p;
		}
		cfg.corpus_path = path_of("corpus");
		cfg.rules_path = path_of("rules");
		cfg.levels_path = path_of("levels");
		cfg.web_root = path_of("web_root");
		if (auto v = kv->get("idle_minutes")) {
			auto n = parse_count(*v);
			if (!n) {
				return unexpected{std::string{"idle_minutes must be a non-negative integer"}};
			}
			cfg.idle_suspend = std::chrono::minutes{*n};
		}
		if (auto v = kv->get("tick_ms")) {
			auto n = parse_count(*v);
			if (!n || *n == 0) {
				return unexpected{std::string{"tick_ms must be a positive integer"}};
			}
			cfg.tick_interval = std::chrono::milliseconds{*n};
		}
		if (auto v = kv->get("threads")) {
			auto n = parse_count(*v);
			if (!n || *n == 0 || *n > 256) {
				return unexpected{std::string{"threads must be within 1..256"}};
			}
			cfg.threads = static_cast<unsigned>(*n);
		}
	}
	if (auto addr = env("PHINDER_ADDR")) {
		if (!parse_listen(*addr, cfg)) {
			return unexpected{"PHINDER_ADDR must be host:port, got '" + *addr + "'"};
		}
	}
	if (auto data = env("PHINDER_DATA")) {
		cfg.data_dir = *data;
	}
	return cfg;
}

auto build_context(const service_config &cfg) -> result<std::shared_ptr<const game_context>, std::string>
{
	corpus items = bundled_corpus();
	if (cfg.corpus_path) {
		auto loaded = load_corpus(*cfg.corpus_path);
		if (!loaded) {
			return unexpected{loaded.error()};
		}
		items = std::move(*loaded);
	}
	rule_config rules;
	brand_directory brands = default_brands();
	if (cfg.rules_path) {
		auto kv = key_values::load(*cfg.rules_path);
		if (!kv) {
			return unexpected{cfg.rules_path->string() + ":" + std::to_string(kv.error().line) + ": " +
							  kv.error().message};
		}
		auto r = load_rules(*kv);
		if (!r) {
			return unexpected{cfg.rules_path->string() + ": " + r.error().message};
		}
		auto b = load_brands(*kv);
		if (!b) {
			return unexpected{cfg.rules_path->string() + ": " + b.error().message};
		}
		rules = std::move(*r);
		brands = std::move(*b);
	}
	auto levels = default_levels();
	if (cfg.levels_path) {
		auto kv = key_values::load(*cfg.levels_path);
		if (!kv) {
			return unexpected{cfg.levels_path->string() + ":" + std::to_string(kv.error().line) + ": " +
							  kv.error().message};
		}
		auto l = load_levels(*kv);
		if (!l) {
			return unexpected{cfg.levels_path->string() + ": " + l.error().message};
		}
		levels = std::move(*l);
	}
	auto ctx = make_context(std::move(levels), std::move(items), std::move(brands), std::move(rules));
	if (!ctx) {
		return unexpected{std::string{to_string(ctx.error().kind)} + ": " + ctx.error().message};
	}
	return *ctx;
}

struct session_hub::entry {
	std::mutex m;
	std::string id;
	std::optional<recorded_session> session;
	std::shared_ptr<std::ofstream> log;
	/* wall time minus engine time */
	timestamp offset{0};
	timestamp last_activity{0};
	std::uint64_t seq = 0;
	std::string last_view;
	std::map<std::uint64_t, frame_fn> subscribers;
	bool suspended = false;
};

session_hub::session_hub(std::shared_ptr<const game_context> ctx, fs::path data_dir, clock_fn clock,
						 std::chrono::milliseconds idle_suspend)
	: ctx_(std::move(ctx)), data_dir_(std::move(data_dir)), clock_(std::move(clock)), idle_suspend_(idle_suspend)
{
	fs::create_directories(data_dir_ / "sessions");
	fs::create_directories(data_dir_ / "profiles");
}

session_hub::~session_hub()
{
	flush_profiles();
}

void session_hub::flush_profiles()
{
	std::lock_guard lock(profiles_mutex_);
	for (auto it = dirty_profiles_.begin(); it != dirty_profiles_.end();) {
		if (save_profile(profiles_.at(*it), profile_path(*it))) {
			it = dirty_profiles_.erase(it);
		}
		else {
			++it;
		}
	}
}

auto session_hub::profile_path(const std::string &player) const -> fs::path
{
	return data_dir_ / "profiles" / (player + ".json");
}

auto session_hub::log_path(const std::string &id) const -> fs::path
{
	return data_dir_ / "sessions" / (id + ".log");
}

auto session_hub::engine_now(entry &e) -> timestamp
{
	return std::max(clock_() - e.offset, e.session->state().last_settled_at);
}

void session_hub::push(entry &e, const std::optional<feedback> &fb, bool force)
{
	auto view = state_view(e.session->state());
	auto dump = view.dump();
	if (!force && !fb && dump == e.last_view) {
		return;
	}
	e.seq++;
	e.last_view = std::move(dump);
	json frame{{"type", "state"},
			   {"session_id", e.id},
			   {"seq", e.seq},
			   {"state", std::move(view)},
			   {"feedback", fb ? feedback_view(*fb) : json(nullptr)}};
	auto text = frame.dump();
	for (const auto &[token, fn] : e.subscribers) {
		fn(text);
	}
}

auto session_hub::update_profile(const std::string &player, const std::function<void(player_profile &)> &fn) -> bool
{
	std::lock_guard lock(profiles_mutex_);
	auto it = profiles_.find(player);
	if (it == profiles_.end()) {
		player_profile p;
		if (fs::exists(profile_path(player))) {
			auto loaded = load_profile(profile_path(player));
			if (!loaded) {
				return false;
			}
			p = std::move(*loaded);
		}
		else {
			p.player_id = player;
		}
		it = profiles_.emplace(player, std::move(p)).first;
	}
	fn(it->second);
	/* rewriting a profile per action is slow on some disks; the ticker flushes */
	dirty_profiles_.insert(player);
	return true;
}

auto session_hub::find(const std::string &id) -> std::shared_ptr<entry>
{
	{
		std::lock_guard lock(sessions_mutex_);
		if (auto it = sessions_.find(id); it != sessions_.end()) {
			return it->second;
		}
	}
	return resume(id);
}

auto session_hub::resume(const std::string &id) -> std::shared_ptr<entry>
{
	if (!valid_session_id(id) || !fs::exists(log_path(id))) {
		return nullptr;
	}
	std::ifstream in(log_path(id));
	auto rep = replay_log(ctx_, in);
	if (!rep || !rep->divergences.empty()) {
		return nullptr;
	}
	auto e = std::make_shared<entry>();
	e->id = id;
	e->log = std::make_shared<std::ofstream>(log_path(id), std::ios::app);
	auto log = e->log;
	auto now = clock_();
	/* time spent suspended does not count: engine time resumes where it stopped */
	e->offset = now - rep->final_state.last_settled_at;
	e->last_activity = now;
	e->session = recorded_session::resume(std::move(rep->final_state), [log](const std::string &line) {
		*log << line << '\n';
		log->flush();
	});
	e->last_view = state_view(e->session->state()).dump();

	std::lock_guard lock(sessions_mutex_);
	auto [it, inserted] = sessions_.emplace(id, e);
	return it->second;
}

auto session_hub::create_session(const json &body) -> reply
{
	if (!body.is_object()) {
		return error_reply(400, "bad_request", "expected a JSON object");
	}
	if (!body.contains("player") || !body["player"].is_string() ||
		!valid_player(body["player"].get<std::string>())) {
		return error_reply(400, "bad_request", "player must be 1-64 characters of [A-Za-z0-9_.-]");
	}
	auto player = body["player"].get<std::string>();
	int level = 1;
	if (body.contains("level")) {
		if (!body["level"].is_number_integer()) {
			return error_reply(400, "bad_request", "level must be an integer");
		}
		level = body["level"].get<int>();
	}
	if (ctx_->level(level) == nullptr) {
		return error_reply(400, "unknown_level", "no level " + std::to_string(level));
	}
	std::uint64_t seed = 0;
	if (body.contains("seed")) {
		if (!body["seed"].is_number_unsigned()) {
			return error_reply(400, "bad_request", "seed must be a non-negative integer");
		}
		seed = body["seed"].get<std::uint64_t>();
	}
	else {
		seed = random_u64();
	}

	std::string id;
	do {
		id = random_session_id();
	} while (fs::exists(log_path(id)));

	auto e = std::make_shared<entry>();
	e->id = id;
	e->log = std::make_shared<std::ofstream>(log_path(id), std::ios::trunc);
	if (!*e->log) {
		return error_reply(500, "io_error", "cannot create the session log");
	}
	auto log = e->log;
	auto s = recorded_session::start(ctx_, id, player, level, seed, [log](const std::string &line) {
		*log << line << '\n';
		log->flush();
	});
	if (!s) {
		return error_reply(400, to_string(s.error().kind), s.error().message);
	}
	if (!update_profile(player, [](player_profile &) {})) {
		return error_reply(500, "io_error", "cannot read the stored player profile");
	}
	e->session = std::move(*s);
	auto now = clock_();
	e->offset = now;
	e->last_activity = now;
	auto view = state_view(e->session->state());
	e->last_view = view.dump();
	{
		std::lock_guard lock(sessions_mutex_);
		sessions_.emplace(id, e);
	}
	return reply{201, json{{"session_id", id}, {"seq", 0}, {"state", std::move(view)}}};
}

auto session_hub::get_state(const std::string &id) -> reply
{
	for (int attempt = 0; attempt < 2; ++attempt) {
		auto e = find(id);
		if (!e) {
			break;
		}
		std::lock_guard lock(e->m);
		if (e->suspended) {
			continue;
		}
		return reply{200, json{{"session_id", id}, {"seq", e->seq}, {"state", state_view(e->session->state())}}};
	}
	return error_reply(404, "not_found", "no session " + id);
}

auto session_hub::submit_action(const std::string &id, const json &body) -> reply
{
	if (!body.is_object() || !body.contains("action") || !body["action"].is_string()) {
		return error_reply(400, "bad_request", "expected {\"action\": ...}");
	}
	const auto name = body["action"].get<std::string>();
	const bool control = name == control_begin || name == control_advance || name == control_retry;
	std::optional<player_action> action;
	if (!control) {
		/* client timestamps are ignored: only action and concept are read */
		auto a = action_from_json(body);
		if (!a) {
			return error_reply(400, "bad_request", a.error());
		}
		action = *a;
	}

	for (int attempt = 0; attempt < 2; ++attempt) {
		auto e = find(id);
		if (!e) {
			break;
		}
		std::lock_guard lock(e->m);
		if (e->suspended) {
			continue;
		}
		auto &session = *e->session;
		auto now = engine_now(*e);
		std::optional<feedback> fb;
		std::optional<engine_error> err;
		const auto &player = session.state().player_id;

		if (name == control_begin) {
			auto r = session.begin(now);
			if (r) {
				update_profile(player, [&](player_profile &p) { record_level_start(p, session.state().level); });
			}
			else {
				err = r.error();
			}
		}
		else if (name == control_advance) {
			auto r = session.advance();
			r ? void() : void(err = r.error());
		}
		else if (name == control_retry) {
			auto r = session.retry();
			r ? void() : void(err = r.error());
		}
		else {
			auto r = session.act(*action, now);
			if (r) {
				fb = *r;
				update_profile(player, [&](player_profile &p) { record_feedback(p, action, *fb); });
			}
			else {
				err = r.error();
			}
		}
		if (err) {
			return error_reply(409, to_string(err->kind), err->message);
		}
		e->last_activity = clock_();
		push(*e, fb, true);
		return reply{200, json{{"session_id", id},
							   {"seq", e->seq},
							   {"feedback", fb ? feedback_view(*fb) : json(nullptr)},
							   {"state", state_view(session.state())}}};
	}
	return error_reply(404, "not_found", "no session " + id);
}

auto session_hub::get_progress(const std::string &player) -> reply
{
	if (!valid_player(player)) {
		return error_reply(404, "not_found", "no player " + player);
	}
	std::lock_guard lock(profiles_mutex_);
	auto it = profiles_.find(player);
	if (it == profiles_.end()) {
		if (!fs::exists(profile_path(player))) {
			return error_reply(404, "not_found", "no player " + player);
		}
		auto loaded = load_profile(profile_path(player));
		if (!loaded) {
			return error_reply(500, "io_error", loaded.error());
		}
		it = profiles_.emplace(player, std::move(*loaded)).first;
	}
	auto body = progress_json(progress_report(it->second, ctx_->final_level()));
	return reply{200, std::move(body)};
}

auto session_hub::subscribe(const std::string &id, frame_fn fn) -> std::optional<std::uint64_t>
{
	for (int attempt = 0; attempt < 2; ++attempt) {
		auto e = find(id);
		if (!e) {
			break;
		}
		std::lock_guard lock(e->m);
		if (e->suspended) {
			continue;
		}
		std::uint64_t token = 0;
		{
			std::lock_guard guard(sessions_mutex_);
			token = next_token_++;
		}
		json frame{{"type", "state"},
				   {"session_id", id},
				   {"seq", e->seq},
				   {"state", state_view(e->session->state())},
				   {"feedback", nullptr}};
		fn(frame.dump());
		e->subscribers.emplace(token, std::move(fn));
		e->last_activity = clock_();
		return token;
	}
	return std::nullopt;
}

void session_hub::unsubscribe(const std::string &id, std::uint64_t token)
{
	std::shared_ptr<entry> e;
	{
		std::lock_guard lock(sessions_mutex_);
		if (auto it = sessions_.find(id); it != sessions_.end()) {
			e = it->second;
		}
	}
	if (e) {
		std::lock_guard lock(e->m);
		e->subscribers.erase(token);
	}
}

void session_hub::tick_all()
{
	std::vector<std::shared_ptr<entry>> live;
	{
		std::lock_guard lock(sessions_mutex_);
		for (const auto &[id, e] : sessions_) {
			live.push_back(e);
		}
	}
	for (const auto &e : live) {
		std::lock_guard lock(e->m);
		if (e->suspended) {
			continue;
		}
		auto fb = e->session->tick(engine_now(*e));
		if (fb) {
			update_profile(e->session->state().player_id,
						   [&](player_profile &p) { record_feedback(p, std::nullopt, *fb); });
		}
		push(*e, fb, false);
	}
	flush_profiles();
}

auto session_hub::suspend_idle() -> std::size_t
{
	std::vector<std::shared_ptr<entry>> live;
	{
		std::lock_guard lock(sessions_mutex_);
		for (const auto &[id, e] : sessions_) {
			live.push_back(e);
		}
	}
	std::size_t n = 0;
	const auto now = clock_();
	for (const auto &e : live) {
		std::lock_guard lock(e->m);
		if (e->suspended || now - e->last_activity <= idle_suspend_) {
			continue;
		}
		/* pin the settled clock in the log so the resumed session starts from it */
		e->session->tick(engine_now(*e), true);
		auto note = json{{"type", "suspended"}, {"session_id", e->id}}.dump();
		for (const auto &[token, fn] : e->subscribers) {
			fn(note);
		}
		e->subscribers.clear();
		e->suspended = true;
		e->log->close();
		{
			std::lock_guard guard(sessions_mutex_);
			sessions_.erase(e->id);
		}
		++n;
	}
	flush_profiles();
	return n;
}

auto session_hub::peek(const std::string &id) -> std::optional<game_state>
{
	auto e = find(id);
	if (!e) {
		return std::nullopt;
	}
	std::lock_guard lock(e->m);
	if (e->suspended) {
		return std::nullopt;
	}
	return e->session->state();
}

auto session_hub::live_sessions() const -> std::size_t
{
	std::lock_guard lock(sessions_mutex_);
	return sessions_.size();
}

auto session_hub::is_session_route(std::string_view target) -> std::optional<std::string>
{
	target = target.substr(0, target.find('?'));
	constexpr std::string_view prefix = "/v1/sessions/";
	constexpr std::string_view suffix = "/stream";
	if (target.size() > prefix.size() + suffix.size() && target.starts_with(prefix) && target.ends_with(suffix)) {
		auto id = target.substr(prefix.size(), target.size() - prefix.size() - suffix.size());
		if (id.find('/') == std::string_view::npos) {
			return std::string{id};
		}
	}
	return std::nullopt;
}

auto session_hub::route(std::string_view method, std::string_view target, std::string_view body) -> reply
{
	auto path = target.substr(0, target.find('?'));
	std::vector<std::string> parts;
	for (const auto &p : text::split(path, '/')) {
		if (!p.empty()) {
			parts.emplace_back(p);
		}
	}
	if (parts.empty() || parts[0] != "v1") {
		return error_reply(404, "not_found", "no route " + std::string{path});
	}
	auto parse_body = [&]() -> std::optional<json> {
		if (text::trim(body).empty()) {
			return json::object();
		}
		auto j = json::parse(body, nullptr, false);
		if (j.is_discarded()) {
			return std::nullopt;
		}
		return j;
	};
	auto wrong_method = [&] { return error_reply(405, "method_not_allowed", std::string{method} + " not allowed"); };

	if (parts.size() == 2 && parts[1] == "sessions") {
		if (method != "POST") {
			return wrong_method();
		}
		auto j = parse_body();
		return j ? create_session(*j) : error_reply(400, "bad_request", "body is not valid JSON");
	}
	if (parts.size() == 3 && parts[1] == "sessions") {
		return method == "GET" ? get_state(parts[2]) : wrong_method();
	}
	if (parts.size() == 4 && parts[1] == "sessions" && parts[3] == "actions") {
		if (method != "POST") {
			return wrong_method();
		}
		auto j = parse_body();
		return j ? submit_action(parts[2], *j) : error_reply(400, "bad_request", "body is not valid JSON");
	}
	if (parts.size() == 4 && parts[1] == "players" && parts[3] == "progress") {
		return method == "GET" ? get_progress(parts[2]) : wrong_method();
	}
	return error_reply(404, "not_found", "no route " + std::string{path});
}

}// namespace phinder
