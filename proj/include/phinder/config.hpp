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
 * Line-oriented "key = value" files. '#' starts a comment line; list values
 * are comma-separated. Used for rules, brands, levels and service settings.
 */

#ifndef PHINDER_CONFIG_HPP
#define PHINDER_CONFIG_HPP

#include "phinder/detector.hpp"
#include "phinder/result.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace phinder {

struct config_error {
	std::size_t line = 0;
	std::string message;
};

class key_values {
public:
	static auto parse(std::string_view text) -> result<key_values, config_error>;
	static auto load(const std::filesystem::path &path) -> result<key_values, config_error>;

	[[nodiscard]] auto get(const std::string &key) const -> std::optional<std::string>;
	[[nodiscard]] auto get_list(const std::string &key) const -> std::optional<std::vector<std::string>>;
	/* Keys in file order. */
	[[nodiscard]] auto keys() const -> const std::vector<std::string> & { return order_; }
	void set(const std::string &key, std::string value);

private:
	std::map<std::string, std::string> values_;
	std::vector<std::string> order_;
};

auto split_list(std::string_view value) -> std::vector<std::string>;

/* Overlay rule keys (punctuation_threshold, urgency_keywords, shortener_domains, homoglyphs) onto defaults. */
auto load_rules(const key_values &kv) -> result<rule_config, config_error>;

/*
 * Brands are declared as brand.<token>.domains, brand.<token>.display_names
 * and brand.<token>.whitelist. When any brand key is present the file
 * replaces the bundled directory.
 */
auto load_brands(const key_values &kv) -> result<brand_directory, config_error>;

}// namespace phinder

#endif
