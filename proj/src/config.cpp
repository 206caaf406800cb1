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

#include "phinder/config.hpp"
#include "text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace phinder {

auto split_list(std::string_view value) -> std::vector<std::string>
{
	std::vector<std::string> out;
	for (auto part : text::split(value, ',')) {
		auto item = text::trim(part);
		if (!item.empty()) {
			out.emplace_back(item);
		}
	}
	return out;
}

auto key_values::parse(std::string_view input) -> result<key_values, config_error>
{
	key_values kv;
	std::size_t line_no = 0;
	for (auto line : text::split(input, '\n')) {
		++line_no;
		auto trimmed = text::trim(line);
		if (trimmed.empty() || trimmed.front() == '#') {
			continue;
		}
		auto eq = trimmed.find('=');
		if (eq == std::string_view::npos) {
			return unexpected{config_error{line_no, "expected 'key = value'"}};
		}
		auto key = std::string{text::trim(trimmed.substr(0, eq))};
		if (key.empty()) {
			return unexpected{config_error{line_no, "empty key"}};
		}
		kv.set(key, std::string{text::trim(trimmed.substr(eq + 1))});
	}
	return kv;
}

auto key_values::load(const std::filesystem::path &path) -> result<key_values, config_error>
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		return unexpected{config_error{0, "cannot open " + path.string()}};
	}
	std::stringstream ss;
	ss << in.rdbuf();
	return parse(ss.str());
}

auto key_values::get(const std::string &key) const -> std::optional<std::string>
{
	auto it = values_.find(key);
	if (it == values_.end()) {
		return std::nullopt;
	}
	return it->second;
}

auto key_values::get_list(const std::string &key) const -> std::optional<std::vector<std::string>>
{
	auto v = get(key);
	if (!v) {
		return std::nullopt;
	}
	return split_list(*v);
}

void key_values::set(const std::string &key, std::string value)
{
	if (!values_.contains(key)) {
		order_.push_back(key);
	}
	values_[key] = std::move(value);
}

auto load_rules(const key_values &kv) -> result<rule_config, config_error>
{
	rule_config cfg;
	if (auto v = kv.get("punctuation_threshold")) {
		int value = 0;
		auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
		if (ec != std::errc{} || ptr != v->data() + v->size()) {
			return unexpected{config_error{0, "punctuation_threshold must be an integer"}};
		}
		cfg.punctuation_threshold = value;
	}
	if (auto v = kv.get_list("urgency_keywords")) {
		cfg.urgency_keywords.clear();
		for (const auto &k : *v) {
			cfg.urgency_keywords.push_back(text::to_lower(k));
		}
	}
	if (auto v = kv.get_list("shortener_domains")) {
		cfg.shortener_domains.clear();
		for (const auto &d : *v) {
			cfg.shortener_domains.insert(text::to_lower(d));
		}
	}
	if (auto v = kv.get_list("homoglyphs")) {
		cfg.homoglyph_map.clear();
		for (const auto &pair : *v) {
			auto colon = pair.rfind(':');
			if (colon == std::string::npos || colon == 0 || colon + 2 != pair.size()) {
				return unexpected{config_error{0, "homoglyph entries look like 'substitute:letter', got '" + pair + "'"}};
			}
			cfg.homoglyph_map.push_back({pair.substr(0, colon), pair.back()});
		}
	}
	if (auto err = cfg.validate(); !err.empty()) {
		return unexpected{config_error{0, err}};
	}
	return cfg;
}

auto load_brands(const key_values &kv) -> result<brand_directory, config_error>
{
	std::vector<brand_entry> entries;
	auto entry_for = [&](const std::string &token) -> brand_entry & {
		for (auto &e : entries) {
			if (e.brand == token) {
				return e;
			}
		}
		entries.push_back(brand_entry{token, {}, {}, {}});
		return entries.back();
	};

	for (const auto &key : kv.keys()) {
		if (key.rfind("brand.", 0) != 0) {
			continue;
		}
		auto rest = std::string_view{key}.substr(6);
		auto dot = rest.rfind('.');
		if (dot == std::string_view::npos || dot == 0) {
			return unexpected{config_error{0, "brand keys look like brand.<token>.<field>: " + key}};
		}
		auto &e = entry_for(text::to_lower(rest.substr(0, dot)));
		auto field = rest.substr(dot + 1);
		auto values = *kv.get_list(key);
		if (field == "domains") {
			for (const auto &d : values) {
				e.legitimate_domains.insert(text::to_lower(d));
			}
		}
		else if (field == "display_names") {
			e.expected_display_names.insert(values.begin(), values.end());
		}
		else if (field == "whitelist") {
			for (const auto &d : values) {
				auto lowered = text::to_lower(d);
				e.whitelisted_domains.insert(lowered);
				e.legitimate_domains.insert(lowered);
			}
		}
		else {
			return unexpected{config_error{0, "unknown brand field: " + key}};
		}
	}
	if (entries.empty()) {
		return default_brands();
	}
	auto dir = brand_directory::create(std::move(entries));
	if (!dir) {
		return unexpected{config_error{0, dir.error()}};
	}
	return std::move(dir).value();
}

}// namespace phinder
