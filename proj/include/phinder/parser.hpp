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

#ifndef PHINDER_PARSER_HPP
#define PHINDER_PARSER_HPP

#include "phinder/model.hpp"
#include "phinder/result.hpp"

#include <string>
#include <string_view>

namespace phinder {

enum class diagnostic_kind : std::uint8_t {
	malformed_url,
	missing_header,
	bad_address,
	empty_body,
};

auto to_string(diagnostic_kind k) -> std::string_view;

struct parse_diagnostic {
	diagnostic_kind kind;
	/* Byte offset into the input that was handed to the parser. */
	std::size_t position = 0;
	std::string message;
};

/*
 * Parse a web address. Accepts bare hosts ("www.g0ogle.com") and defaults
 * the scheme to http; lowercases scheme and host; the path defaults to "/".
 * The fragment, if any, is dropped.
 */
auto parse_url(std::string_view raw) -> result<url, parse_diagnostic>;

/*
 * Parse a simplified message: "Name: value" header lines (From, To,
 * Reply-To, Subject recognized, others ignored), one blank line, body.
 * No folding, no MIME.
 */
auto parse_email(std::string_view raw) -> result<email_message, parse_diagnostic>;

/* Parse "local@domain" (domain lowercased, must contain a dot). */
auto parse_address(std::string_view text) -> std::optional<email_address>;

/* Four dot-separated decimal octets 0-255, no leading zeros. */
auto is_ipv4_literal(std::string_view host) -> bool;

/*
 * Last two labels, or last three when the last two form a known two-level
 * public suffix such as "com.au" or "co.uk".
 */
auto registrable_domain(std::string_view host) -> std::string;

/* First label of the registrable domain and its byte offset inside host. */
struct registrable_label_view {
	std::string label;
	std::size_t offset = 0;
};
auto registrable_label(std::string_view host) -> registrable_label_view;

auto two_level_suffixes() -> const std::vector<std::string_view> &;

/* Split body text into plain-text and HTML segments; concatenating the segment texts gives the input back. */
auto segment_body(std::string_view body) -> std::vector<body_segment>;

}// namespace phinder

#endif
