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
 * phinder: serve, validate, genbank, simulate, replay.
 * Exit codes: 0 success, 1 validation failure or divergence, 2 bad
 * arguments, 3 I/O error.
 */

#include "phinder/codec.hpp"
#include "phinder/generator.hpp"
#include "phinder/replay.hpp"
#include "phinder/server.hpp"
#include "phinder/service.hpp"
#include "phinder/simulate.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <pthread.h>

using namespace phinder;
namespace fs = std::filesystem;

namespace {

constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

struct context_paths {
	std::string corpus;
	std::string rules;
	std::string levels;

	void add(CLI::App *cmd)
	{
		cmd->add_option("--corpus", corpus, "Corpus directory or file (default: bundled corpus)");
		cmd->add_option("--rules", rules, "Rule and brand config file");
		cmd->add_option("--level-config", levels, "Level config file");
	}

	void apply(service_config &cfg) const
	{
		if (!corpus.empty()) {
			cfg.corpus_path = corpus;
		}
		if (!rules.empty()) {
			cfg.rules_path = rules;
		}
		if (!levels.empty()) {
			cfg.levels_path = levels;
		}
	}

	[[nodiscard]] auto context() const -> result<std::shared_ptr<const game_context>, std::string>
	{
		service_config cfg;
		apply(cfg);
		return build_context(cfg);
	}
};

auto print_row(std::ostream &out, const std::vector<std::string> &cells, const std::vector<int> &widths)
{
	for (std::size_t i = 0; i < cells.size(); ++i) {
		out << (i == 0 ? "" : "  ") << std::setw(widths[i]) << cells[i];
	}
	out << '\n';
}

/* --- serve --- */

auto cmd_serve(const std::string &config_file, const std::string &listen, const std::string &data,
			   const std::string &web_root, const context_paths &paths) -> int
{
	auto env = process_env();
	auto overrides = [&](const char *name) -> std::optional<std::string> {
		/* command line flags beat the environment */
		if (std::string_view{name} == "PHINDER_ADDR" && !listen.empty()) {
			return listen;
		}
		if (std::string_view{name} == "PHINDER_DATA" && !data.empty()) {
			return data;
		}
		return env(name);
	};
	auto cfg = load_service_config(config_file.empty() ? std::nullopt : std::optional<fs::path>{config_file}, overrides);
	if (!cfg) {
		std::cerr << "phinder: " << cfg.error() << '\n';
		return exit_usage;
	}
	paths.apply(*cfg);
	if (!web_root.empty()) {
		cfg->web_root = web_root;
	}
	auto ctx = build_context(*cfg);
	if (!ctx) {
		std::cerr << "phinder: " << ctx.error() << '\n';
		return exit_failed;
	}

	/* block termination signals before any worker thread starts */
	sigset_t signals;
	sigemptyset(&signals);
	sigaddset(&signals, SIGINT);
	sigaddset(&signals, SIGTERM);
	pthread_sigmask(SIG_BLOCK, &signals, nullptr);

	std::error_code ec;
	fs::create_directories(cfg->data_dir, ec);
	if (ec) {
		std::cerr << "phinder: cannot create " << cfg->data_dir << ": " << ec.message() << '\n';
		return exit_io;
	}
	auto wall = [] {
		return std::chrono::duration_cast<timestamp>(std::chrono::system_clock::now().time_since_epoch());
	};
	session_hub hub{*ctx, cfg->data_dir, wall, cfg->idle_suspend};
	http_server server{hub, *cfg};
	auto port = server.start();
	if (!port) {
		std::cerr << "phinder: " << port.error() << '\n';
		return exit_io;
	}
	std::cout << "phinder: listening on " << cfg->host << ':' << *port << ", data in " << cfg->data_dir.string()
			  << std::endl;

	int sig = 0;
	sigwait(&signals, &sig);
	std::cout << "phinder: shutting down" << std::endl;
	server.stop();
	return 0;
}

/* --- validate --- */

auto cmd_validate(const std::string &corpus_path, const context_paths &paths) -> int
{
	auto items = load_corpus(corpus_path);
	if (!items) {
		std::cerr << "phinder: " << items.error() << '\n';
		return exit_io;
	}
	service_config cfg;
	paths.apply(cfg);
	cfg.corpus_path.reset();
	rule_config rules;
	brand_directory brands = default_brands();
	if (cfg.rules_path) {
		auto kv = key_values::load(*cfg.rules_path);
		if (!kv) {
			std::cerr << "phinder: " << cfg.rules_path->string() << ":" << kv.error().line << ": "
					  << kv.error().message << '\n';
			return exit_io;
		}
		auto r = load_rules(*kv);
		auto b = load_brands(*kv);
		if (!r || !b) {
			std::cerr << "phinder: " << (r ? b.error().message : r.error().message) << '\n';
			return exit_usage;
		}
		rules = *r;
		brands = *b;
	}
	auto report = validate_corpus(*items, brands, rules);
	for (const auto &entry : report) {
		std::cout << entry.item_id << ":";
		for (auto c : entry.report.concepts()) {
			std::cout << ' ' << to_string(c);
		}
		std::cout << '\n';
		for (const auto &f : entry.report.findings) {
			std::cout << "  " << f.rule << " at " << f.span.field << "[" << f.span.start << "," << f.span.end
					  << "): " << f.detail << '\n';
		}
	}
	std::cout << items->size() << " items, " << report.size() << " not clean\n";
	return report.empty() ? 0 : exit_failed;
}

/* --- genbank --- */

auto cmd_genbank(int level, std::size_t n, std::uint64_t seed, const std::string &out_path,
				 const context_paths &paths) -> int
{
	auto ctx = paths.context();
	if (!ctx) {
		std::cerr << "phinder: " << ctx.error() << '\n';
		return exit_failed;
	}
	const auto *cfg = (*ctx)->level(level);
	if (cfg == nullptr) {
		std::cerr << "phinder: no level " << level << '\n';
		return exit_usage;
	}
	auto bank = generate_bank(*cfg, n, seed, (*ctx)->items, (*ctx)->brands, (*ctx)->rules);
	if (!bank) {
		std::cerr << "phinder: " << bank.error().message << '\n';
		return exit_failed;
	}
	std::ofstream file;
	if (!out_path.empty()) {
		file.open(out_path, std::ios::binary | std::ios::trunc);
		if (!file) {
			std::cerr << "phinder: cannot write " << out_path << '\n';
			return exit_io;
		}
	}
	std::ostream &out = out_path.empty() ? std::cout : file;
	for (const auto &w : *bank) {
		out << bank_record(w) << '\n';
	}
	out.flush();
	if (!out) {
		std::cerr << "phinder: write failed\n";
		return exit_io;
	}
	return 0;
}

/* --- simulate --- */

struct simulate_args {
	std::string policy = "oracle";
	std::uint64_t policy_seed = 0;
	int levels = 5;
	int start_level = 1;
	std::uint64_t seed = 0;
	std::string csv;
	std::string log;
	std::int64_t think_ms = 0;
	int max_attempts = 3;
};

auto cmd_simulate(const simulate_args &args, const context_paths &paths) -> int
{
	auto ctx = paths.context();
	if (!ctx) {
		std::cerr << "phinder: " << ctx.error() << '\n';
		return exit_failed;
	}
	auto spec = parse_policy(args.policy);
	if (!spec) {
		std::cerr << "phinder: " << spec.error() << '\n';
		return exit_usage;
	}
	spec->seed = args.policy_seed;

	std::ofstream log;
	if (!args.log.empty()) {
		log.open(args.log, std::ios::trunc);
		if (!log) {
			std::cerr << "phinder: cannot write " << args.log << '\n';
			return exit_io;
		}
	}
	simulation_options opts;
	opts.policy = *spec;
	opts.levels = args.levels;
	opts.start_level = args.start_level;
	opts.seed = args.seed;
	opts.think_time = timestamp{args.think_ms};
	opts.max_attempts = args.max_attempts;
	if (log.is_open()) {
		opts.log = [&log](const std::string &line) { log << line << '\n'; };
	}
	auto sim = simulate(*ctx, opts);
	if (!sim) {
		std::cerr << "phinder: " << to_string(sim.error().kind) << ": " << sim.error().message << '\n';
		return sim.error().kind == engine_error_kind::unknown_level ? exit_usage : exit_failed;
	}

	const std::vector<std::string> header{"level", "attempts", "score", "lives_lost", "timeouts",
										  "medals", "worms", "phishing", "result"};
	std::vector<std::vector<std::string>> rows;
	for (const auto &r : sim->rows) {
		rows.push_back({std::to_string(r.level), std::to_string(r.attempts), std::to_string(r.score),
						std::to_string(r.lives_lost), std::to_string(r.timeouts), std::to_string(r.medals),
						std::to_string(r.worms), std::to_string(r.phishing), r.result});
	}
	std::vector<int> widths;
	for (std::size_t i = 0; i < header.size(); ++i) {
		auto w = header[i].size();
		for (const auto &row : rows) {
			w = std::max(w, row[i].size());
		}
		widths.push_back(static_cast<int>(w));
	}
	print_row(std::cout, header, widths);
	for (const auto &row : rows) {
		print_row(std::cout, row, widths);
	}
	std::cout << "total score " << sim->total_score << ", " << sim->decisions << " decisions, "
			  << sim->wrong_decisions << " wrong, final phase " << to_string(sim->final_state.phase) << ", digest "
			  << state_digest(sim->final_state) << '\n';

	if (!args.csv.empty()) {
		std::ofstream csv(args.csv, std::ios::trunc);
		for (std::size_t i = 0; i < header.size(); ++i) {
			csv << (i ? "," : "") << header[i];
		}
		csv << '\n';
		for (const auto &row : rows) {
			for (std::size_t i = 0; i < row.size(); ++i) {
				csv << (i ? "," : "") << row[i];
			}
			csv << '\n';
		}
		if (!csv) {
			std::cerr << "phinder: cannot write " << args.csv << '\n';
			return exit_io;
		}
	}
	if (log.is_open() && !log.flush()) {
		std::cerr << "phinder: write to " << args.log << " failed\n";
		return exit_io;
	}
	return 0;
}

/* --- replay --- */

auto cmd_replay(const std::string &path, bool print_state, const context_paths &paths) -> int
{
	auto ctx = paths.context();
	if (!ctx) {
		std::cerr << "phinder: " << ctx.error() << '\n';
		return exit_failed;
	}
	std::ifstream in(path);
	if (!in) {
		std::cerr << "phinder: cannot read " << path << '\n';
		return exit_io;
	}
	auto rep = replay_log(*ctx, in);
	if (!rep) {
		std::cerr << "phinder: " << path << ": " << rep.error() << '\n';
		return exit_failed;
	}
	const auto &s = rep->final_state;
	std::cout << "records " << rep->records << ", divergences " << rep->divergences.size() << '\n';
	std::cout << "final: level " << s.level << ", phase " << to_string(s.phase) << ", score " << s.score
			  << ", lives " << s.lives << ", medals " << s.medals.size() << ", digest " << state_digest(s) << '\n';
	for (const auto &d : rep->divergences) {
		std::cout << "divergence at line " << d.line << ": logged " << d.expected << ", recomputed " << d.actual;
		if (!d.note.empty()) {
			std::cout << " (" << d.note << ")";
		}
		std::cout << '\n';
	}
	if (print_state) {
		std::cout << state_json(s).dump(2) << '\n';
	}
	return rep->divergences.empty() ? 0 : exit_failed;
}

}// namespace

auto main(int argc, char **argv) -> int
{
	CLI::App app{"Phish Phinder: game service and tooling"};
	app.require_subcommand(1);
	context_paths paths;

	auto *serve = app.add_subcommand("serve", "Run the HTTP and WebSocket service");
	std::string config_file, listen, data, web_root;
	serve->add_option("-c,--config", config_file, "Service config file");
	serve->add_option("--listen", listen, "host:port (overrides PHINDER_ADDR)");
	serve->add_option("--data", data, "Data directory (overrides PHINDER_DATA)");
	serve->add_option("--web-root", web_root, "Directory of static client files");
	paths.add(serve);

	auto *validate = app.add_subcommand("validate", "Check that every corpus item detects clean");
	std::string corpus_path;
	validate->add_option("corpus", corpus_path, "Corpus directory or file")->required();
	validate->add_option("--rules", paths.rules, "Rule and brand config file");

	auto *genbank = app.add_subcommand("genbank", "Write a worm bank, one JSON record per line");
	int level = 1;
	std::size_t count = 10;
	std::uint64_t bank_seed = 0;
	std::string out_path;
	genbank->add_option("--level", level, "Level whose config drives generation")->required();
	genbank->add_option("-n,--count", count, "Number of worms")->required();
	genbank->add_option("--seed", bank_seed, "Generation seed")->required();
	genbank->add_option("-o,--out", out_path, "Output file (default: stdout)");
	paths.add(genbank);

	auto *sim = app.add_subcommand("simulate", "Play with a scripted policy and print a per-level table");
	simulate_args sargs;
	sim->add_option("--policy", sargs.policy,
					"oracle | random[:accuracy] | skill:concept=accuracy,...  (accuracies in [0,1])")
		->capture_default_str();
	sim->add_option("--policy-seed", sargs.policy_seed, "Seed of the policy's own choices")->capture_default_str();
	sim->add_option("--levels", sargs.levels, "Number of levels to play")->capture_default_str();
	sim->add_option("--start-level", sargs.start_level, "First level")->capture_default_str();
	sim->add_option("--seed", sargs.seed, "Session seed")->capture_default_str();
	sim->add_option("--csv", sargs.csv,
					"Also write the table as CSV with columns "
					"level,attempts,score,lives_lost,timeouts,medals,worms,phishing,result");
	sim->add_option("--log", sargs.log, "Write the session replay log here");
	sim->add_option("--think-time", sargs.think_ms, "Milliseconds before each action")->capture_default_str();
	sim->add_option("--max-attempts", sargs.max_attempts, "Attempts per level after timeouts")->capture_default_str();
	paths.add(sim);

	auto *replay = app.add_subcommand("replay", "Recompute a session from its log and check every digest");
	std::string log_path;
	bool print_state = false;
	replay->add_option("log", log_path, "Replay log")->required();
	replay->add_flag("--state", print_state, "Print the recomputed final state as JSON");
	paths.add(replay);

	try {
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	}
	catch (const CLI::CallForAllHelp &e) {
		return app.exit(e);
	}
	catch (const CLI::ParseError &e) {
		app.exit(e);
		return exit_usage;
	}

	if (*serve) {
		return cmd_serve(config_file, listen, data, web_root, paths);
	}
	if (*validate) {
		return cmd_validate(corpus_path, paths);
	}
	if (*genbank) {
		return cmd_genbank(level, count, bank_seed, out_path, paths);
	}
	if (*sim) {
		return cmd_simulate(sargs, paths);
	}
	return cmd_replay(log_path, print_state, paths);
}
