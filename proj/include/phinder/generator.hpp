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
 * Worm generation: a validated clean corpus is mutated with one operator per
 * concept. Everything is a pure function of an explicit rng_state so a
 * session seed replays to the same worms on every platform.
 */

#ifndef PHINDER_GENERATOR_HPP
#define PHINDER_GENERATOR_HPP

#include "phinder/config.hpp"
#include "phinder/detector.hpp"
#include "phinder/model.hpp"
#include "phinder/result.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace phinder {

struct corpus_item {
	std::string id;
	worm_content content;
};

struct corpus {
	std::vector<corpus_item> items;

	[[nodiscard]] auto size() const -> std::size_t { return items.size(); }
};

/*
 * Parse corpus files. URL lists hold one address per line; email files hold
 * messages separated by a line containing only "%%". '#' lines in URL lists
 * are comments. Ids are "<name>:<line>" and "<name>#<n>".
 */
auto parse_url_list(std::string_view text, std::string_view name) -> result<std::vector<corpus_item>, std::string>;
auto parse_email_file(std::string_view text, std::string_view name) -> result<std::vector<corpus_item>, std::string>;

/* Load every *.urls and *.emails file of a directory (or one such file). */
auto load_corpus(const std::filesystem::path &path) -> result<corpus, std::string>;

/* The corpus shipped in data/corpus, compiled into the library. */
auto bundled_corpus() -> const corpus &;

struct validation_entry {
	std::string item_id;
	detection_report report;
};

/* Every item that does not detect clean; empty means the corpus is usable. */
auto validate_corpus(const corpus &c, const brand_directory &brands, const rule_config &cfg)
	-> std::vector<validation_entry>;

struct ratio {
	std::uint32_t num = 0;
	std::uint32_t den = 1;

	[[nodiscard]] auto value() const -> double { return static_cast<double>(num) / den; }
	friend auto operator==(const ratio &, const ratio &) -> bool = default;
};

struct level_config {
	int level = 1;
	concept_set allowed_concepts;
	int concepts_per_phish = 1;
	int worm_count = 10;
	ratio phish_fraction{1, 2};
	std::chrono::seconds time_limit{600};
	ratio bonus_probability{1, 10};
	std::chrono::seconds bonus_window{30};

	[[nodiscard]] auto validate() const -> std::string;
};

/* Five-level ladder: L1 600 s ... L5 all six concepts, two per phish. */
auto default_levels() -> const std::vector<level_config> &;

/* Levels from level.<n>.<field> keys; missing fields inherit the default for that level. */
auto load_levels(const key_values &kv) -> result<std::vector<level_config>, config_error>;

enum class mutation_error_kind : std::uint8_t {
	inapplicable_concept,
	no_mutable_position,
};

struct mutation_error {
	mutation_error_kind kind;
	std::string message;
};

auto to_string(mutation_error_kind k) -> std::string_view;

/* URL concepts need a link (an email gets one appended); the rest need an email. */
auto concept_applies(phishing_concept c, const worm_content &content) -> bool;

auto mutate(phishing_concept c, const worm_content &item, const brand_directory &brands, const rule_config &cfg,
			std::uint64_t seed) -> result<worm_content, mutation_error>;

/* Session seed plus the number of worms drawn so far. */
struct rng_state {
	std::uint64_t seed = 0;
	std::uint64_t draws = 0;
	friend auto operator==(const rng_state &, const rng_state &) -> bool = default;
};

inline constexpr int max_redraws = 100;

enum class generate_error_kind : std::uint8_t {
	exhausted_corpus,
	invalid_level,
};

struct generate_error {
	generate_error_kind kind;
	std::string message;
};

auto to_string(generate_error_kind k) -> std::string_view;

struct generated_worm {
	worm value;
	rng_state next;
};

auto generate_worm(const level_config &cfg, const corpus &items, const brand_directory &brands,
				   const rule_config &rules, rng_state state) -> result<generated_worm, generate_error>;

auto generate_bank(const level_config &cfg, std::size_t n, std::uint64_t seed, const corpus &items,
				   const brand_directory &brands, const rule_config &rules)
	-> result<std::vector<worm>, generate_error>;

/* Bank with the default level ladder, bundled corpus, brands and rules. */
auto generate_bank(int level, std::size_t n, std::uint64_t seed) -> result<std::vector<worm>, generate_error>;

/*
 * One JSON object per line with fixed field order:
 * id, kind, content, ground_truth, concepts, bonus, corpus_item, seed.
 */
auto bank_record(const worm &w) -> std::string;

}// namespace phinder

#endif
