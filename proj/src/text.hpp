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

/* ASCII-only string helpers shared by the parser and rules. */

#ifndef PHINDER_TEXT_HPP
#define PHINDER_TEXT_HPP

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace phinder::text {

constexpr auto is_alpha(char c) -> bool
{
	return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
constexpr auto is_digit(char c) -> bool
{
	return c >= '0' && c <= '9';
}
constexpr auto is_alnum(char c) -> bool
{
	return is_alpha(c) || is_digit(c);
}
constexpr auto is_space(char c) -> bool
{
	return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}
constexpr auto lower(char c) -> char
{
	return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline auto to_lower(std::string_view s) -> std::string
{
	std::string out{s};
	std::transform(out.begin(), out.end(), out.begin(), lower);
	return out;
}

inline auto trim(std::string_view s) -> std::string_view
{
	while (!s.empty() && is_space(s.front())) {
		s.remove_prefix(1);
	}
	while (!s.empty() && is_space(s.back())) {
		s.remove_suffix(1);
	}
	return s;
}

inline auto split(std::string_view s, char sep) -> std::vector<std::string_view>
{
	std::vector<std::string_view> out;
	std::size_t pos = 0;
	while (true) {
		auto next = s.find(sep, pos);
		if (next == std::string_view::npos) {
			out.push_back(s.substr(pos));
			return out;
		}
		out.push_back(s.substr(pos, next - pos));
		pos = next + 1;
	}
}

/* Case-insensitive find; needle is expected in lowercase. */
inline auto ifind(std::string_view hay, std::string_view needle, std::size_t from = 0) -> std::size_t
{
	if (needle.empty()) {
		return from <= hay.size() ? from : std::string_view::npos;
	}
	if (hay.size() < needle.size()) {
		return std::string_view::npos;
	}
	for (auto i = from; i + needle.size() <= hay.size(); ++i) {
		bool match = true;
		for (std::size_t j = 0; j < needle.size(); ++j) {
			if (lower(hay[i + j]) != needle[j]) {
				match = false;
				break;
			}
		}
		if (match) {
			return i;
		}
	}
	return std::string_view::npos;
}

inline auto iequals(std::string_view a, std::string_view b) -> bool
{
	return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
			   return lower(x) == lower(y);
		   });
}

inline auto join(const std::vector<std::string> &parts, std::string_view sep) -> std::string
{
	std::string out;
	for (std::size_t i = 0; i < parts.size(); ++i) {
		if (i != 0) {
			out += sep;
		}
		out += parts[i];
	}
	return out;
}

}// namespace phinder::text

#endif
