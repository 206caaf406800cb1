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

#include "phinder/parser.hpp"
#include "text.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace phinder {

namespace {

auto diag(diagnostic_kind kind, std::size_t pos, std::string msg) -> unexpected<parse_diagnostic>
{
	return unexpected{parse_diagnostic{kind, pos, std::move(msg)}};
}

auto valid_scheme(std::string_view s) -> bool
{
	if (s.empty() || !text::is_alpha(s.front())) {
		return false;
	}
	return std::all_of(s.begin(), s.end(), [](char c) {
		return text::is_alnum(c) || c == '+' || c == '-' || c == '.';
	});
}

/* '@' is accepted inside labels so homoglyph hosts like "p@ypal.com" parse; userinfo is not modelled. */
auto valid_host_char(char c) -> bool
{
	return text::is_alnum(c) || c == '-' || c == '_' || c == '@';
}

constexpr std::array void_tags{
	std::string_view{"area"}, std::string_view{"base"}, std::string_view{"br"},
	std::string_view{"col"}, std::string_view{"embed"}, std::string_view{"hr"},
	std::string_view{"img"}, std::string_view{"input"}, std::string_view{"link"},
	std::string_view{"meta"}, std::string_view{"source"}, std::string_view{"track"},
	std::string_view{"wbr"},
};

struct tag_info {
	std::string name;// lowercased
	std::size_t end = 0;// one past '>'
	bool closing = false;
	bool self_closing = false;
};

/* Recognize "<name ...>" or "</name>" starting at pos. */
auto read_tag(std::string_view s, std::size_t pos) -> std::optional<tag_info>
{
	if (pos >= s.size() || s[pos] != '<') {
		return std::nullopt;
	}
	tag_info tag;
	auto i = pos + 1;
	if (i < s.size() && s[i] == '/') {
		tag.closing = true;
		++i;
	}
	if (i >= s.size() || !text::is_alpha(s[i])) {
		return std::nullopt;
	}
	auto name_start = i;
	while (i < s.size() && text::is_alnum(s[i])) {
		++i;
	}
	if (i >= s.size()) {
		return std::nullopt;
	}
	if (s[i] != '>' && s[i] != '/' && !text::is_space(s[i])) {
		return std::nullopt;
	}
	tag.name = text::to_lower(s.substr(name_start, i - name_start));

	char quote = 0;
	for (; i < s.size(); ++i) {
		auto c = s[i];
		if (quote != 0) {
			if (c == quote) {
				quote = 0;
			}
		}
		else if (c == '"' || c == '\'') {
			quote = c;
		}
		else if (c == '<') {
			return std::nullopt;
		}
		else if (c == '>') {
			tag.end = i + 1;
			tag.self_closing = !tag.closing && s[i - 1] == '/';
			return tag;
		}
	}
	return std::nullopt;
}

/* End of the element opened by `open` (one past its matching close tag). */
auto find_element_end(std::string_view s, const tag_info &open) -> std::optional<std::size_t>
{
	int depth = 1;
	auto pos = open.end;
	while (true) {
		pos = s.find('<', pos);
		if (pos == std::string_view::npos) {
			return std::nullopt;
		}
		auto tag = read_tag(s, pos);
		if (!tag) {
			++pos;
			continue;
		}
		if (tag->name == open.name && !tag->self_closing) {
			depth += tag->closing ? -1 : 1;
			if (depth == 0) {
				return tag->end;
			}
		}
		pos = tag->end;
	}
}

auto is_url_terminator(char c) -> bool
{
	return text::is_space(c) || c == '<' || c == '>' || c == '"' || c == '\'';
}

void extract_text_links(body_segment &seg)
{
	std::string_view s = seg.text;
	std::size_t pos = 0;
	while (pos < s.size()) {
		auto http = text::ifind(s, "http://", pos);
		auto https = text::ifind(s, "https://", pos);
		auto start = std::min(http, https);
		if (start == std::string_view::npos) {
			break;
		}
		auto end = start;
		while (end < s.size() && !is_url_terminator(s[end])) {
			++end;
		}
		while (end > start && std::string_view{".,;:!?)"}.find(s[end - 1]) != std::string_view::npos) {
			--end;
		}
		if (auto parsed = parse_url(s.substr(start, end - start))) {
			seg.urls.push_back(embedded_url{std::move(parsed).value(), start});
		}
		pos = std::max(end, start + 1);
	}
}

void extract_hrefs(body_segment &seg)
{
	std::string_view s = seg.text;
	std::size_t pos = 0;
	while ((pos = text::ifind(s, "href", pos)) != std::string_view::npos) {
		auto i = pos + 4;
		while (i < s.size() && text::is_space(s[i])) {
			++i;
		}
		if (i >= s.size() || s[i] != '=') {
			pos = i;
			continue;
		}
		++i;
		while (i < s.size() && text::is_space(s[i])) {
			++i;
		}
		if (i >= s.size() || (s[i] != '"' && s[i] != '\'')) {
			pos = i;
			continue;
		}
		auto quote = s[i];
		auto value_start = i + 1;
		auto value_end = s.find(quote, value_start);
		if (value_end == std::string_view::npos) {
			break;
		}
		auto value = s.substr(value_start, value_end - value_start);
		if (!text::trim(value).empty()) {
			if (auto parsed = parse_url(value)) {
				auto lead = value.find_first_not_of(" \t\r\n");
				seg.urls.push_back(embedded_url{std::move(parsed).value(), value_start + lead});
			}
		}
		pos = value_end + 1;
	}
}

struct header_line {
	std::string_view value;
	std::size_t value_offset = 0;
};

}// namespace

auto to_string(diagnostic_kind k) -> std::string_view
{
	switch (k) {
	case diagnostic_kind::malformed_url:
		return "malformed_url";
	case diagnostic_kind::missing_header:
		return "missing_header";
	case diagnostic_kind::bad_address:
		return "bad_address";
	case diagnostic_kind::empty_body:
		return "empty_body";
	}
	return "unknown";
}

auto is_ipv4_literal(std::string_view host) -> bool
{
	int octets = 0;
	std::size_t pos = 0;
	while (true) {
		auto dot = host.find('.', pos);
		auto part = host.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
		if (part.empty() || part.size() > 3 || (part.size() > 1 && part.front() == '0')) {
			return false;
		}
		unsigned value = 0;
		auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
		if (ec != std::errc{} || ptr != part.data() + part.size() || value > 255) {
			return false;
		}
		++octets;
		if (dot == std::string_view::npos) {
			break;
		}
		pos = dot + 1;
	}
	return octets == 4;
}

auto two_level_suffixes() -> const std::vector<std::string_view> &
{
	static const std::vector<std::string_view> suffixes{
		"com.au", "net.au", "org.au", "edu.au", "gov.au", "asn.au", "id.au",
		"co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "ltd.uk", "plc.uk", "net.uk",
		"co.nz", "org.nz", "net.nz", "govt.nz", "ac.nz",
		"co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
		"co.in", "net.in", "org.in", "gov.in", "ac.in",
		"com.br", "net.br", "org.br", "gov.br",
		"com.cn", "net.cn", "org.cn", "gov.cn",
		"com.sg", "com.hk", "co.za", "org.za", "com.mx", "co.kr",
	};
	return suffixes;
}

auto registrable_label(std::string_view host) -> registrable_label_view
{
	auto labels = text::split(host, '.');
	std::size_t keep = 2;
	if (labels.size() >= 3) {
		auto last_two = std::string{labels[labels.size() - 2]} + "." + std::string{labels.back()};
		const auto &suffixes = two_level_suffixes();
		if (std::find(suffixes.begin(), suffixes.end(), last_two) != suffixes.end()) {
			keep = 3;
		}
	}
	if (labels.size() <= keep) {
		return {std::string{labels.empty() ? host : labels.front()}, 0};
	}
	auto first = labels.size() - keep;
	std::size_t offset = 0;
	for (std::size_t i = 0; i < first; ++i) {
		offset += labels[i].size() + 1;
	}
	return {std::string{labels[first]}, offset};
}

auto registrable_domain(std::string_view host) -> std::string
{
	auto lbl = registrable_label(host);
	return std::string{host.substr(lbl.offset)};
}

auto url::serialize() const -> std::string
{
	std::string out = scheme + "://" + host;
	if (port) {
		out += ":" + std::to_string(*port);
	}
	out += path;
	if (query) {
		out += "?" + *query;
	}
	return out;
}

auto parse_url(std::string_view input) -> result<url, parse_diagnostic>
{
	auto lead = input.find_first_not_of(" \t\r\n\f\v");
	if (lead == std::string_view::npos) {
		return diag(diagnostic_kind::malformed_url, 0, "empty URL");
	}
	auto s = text::trim(input);

	url u;
	u.raw = std::string{s};

	std::size_t pos = 0;
	auto sep = s.find("://");
	auto first_delim = s.find_first_of("/?#");
	if (sep != std::string_view::npos && sep <= first_delim) {
		auto scheme = s.substr(0, sep);
		if (!valid_scheme(scheme)) {
			return diag(diagnostic_kind::malformed_url, lead, "invalid scheme");
		}
		u.scheme = text::to_lower(scheme);
		pos = sep + 3;
	}
	else {
		u.scheme = "http";
	}

	auto auth_end = s.find_first_of("/?#", pos);
	if (auth_end == std::string_view::npos) {
		auth_end = s.size();
	}
	auto authority = s.substr(pos, auth_end - pos);
	auto host_text = authority;
	if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
		auto port_text = authority.substr(colon + 1);
		unsigned value = 0;
		auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
		if (port_text.empty() || port_text.size() > 5 || ec != std::errc{} ||
			ptr != port_text.data() + port_text.size() || value == 0 || value > 65535) {
			return diag(diagnostic_kind::malformed_url, lead + pos + colon + 1, "invalid port");
		}
		u.port = static_cast<std::uint16_t>(value);
		host_text = authority.substr(0, colon);
	}
	if (!host_text.empty() && host_text.back() == '.') {
		host_text.remove_suffix(1);
	}
	if (host_text.empty()) {
		return diag(diagnostic_kind::malformed_url, lead + pos, "missing host");
	}
	for (std::size_t i = 0; i < host_text.size(); ++i) {
		auto c = host_text[i];
		bool empty_label = c == '.' && (i == 0 || host_text[i - 1] == '.');
		if (empty_label || (c != '.' && !valid_host_char(c))) {
			return diag(diagnostic_kind::malformed_url, lead + pos + i, "invalid host character");
		}
	}
	u.host = text::to_lower(host_text);
	u.host_offset = pos;
	u.kind = is_ipv4_literal(u.host) ? host_kind::ipv4_literal : host_kind::dns_name;

	pos = auth_end;
	if (pos < s.size() && s[pos] == '/') {
		auto path_end = s.find_first_of("?#", pos);
		if (path_end == std::string_view::npos) {
			path_end = s.size();
		}
		u.path = std::string{s.substr(pos, path_end - pos)};
		pos = path_end;
	}
	if (pos < s.size() && s[pos] == '?') {
		auto query_end = s.find('#', pos);
		if (query_end == std::string_view::npos) {
			query_end = s.size();
		}
		u.query = std::string{s.substr(pos + 1, query_end - pos - 1)};
	}
	return u;
}

auto parse_address(std::string_view input) -> std::optional<email_address>
{
	auto s = text::trim(input);
	auto at = s.find('@');
	if (at == std::string_view::npos || at == 0 || s.find('@', at + 1) != std::string_view::npos) {
		return std::nullopt;
	}
	auto local = s.substr(0, at);
	auto domain = s.substr(at + 1);
	for (auto c : local) {
		if (text::is_space(c) || c == '<' || c == '>' || c == ',') {
			return std::nullopt;
		}
	}
	if (domain.empty() || domain.find('.') == std::string_view::npos || domain.front() == '.' ||
		domain.back() == '.' || domain.find("..") != std::string_view::npos) {
		return std::nullopt;
	}
	for (auto c : domain) {
		if (!text::is_alnum(c) && c != '-' && c != '.' && c != '_') {
			return std::nullopt;
		}
	}
	return email_address{std::string{local}, text::to_lower(domain)};
}

auto segment_body(std::string_view body) -> std::vector<body_segment>
{
	std::vector<body_segment> out;
	auto emit = [&](segment_kind kind, std::size_t from, std::size_t to) {
		if (to <= from) {
			return;
		}
		body_segment seg;
		seg.kind = kind;
		seg.text = std::string{body.substr(from, to - from)};
		if (kind == segment_kind::html_fragment) {
			extract_hrefs(seg);
		}
		else {
			extract_text_links(seg);
		}
		out.push_back(std::move(seg));
	};

	std::size_t seg_start = 0;
	std::size_t pos = 0;
	while ((pos = body.find('<', pos)) != std::string_view::npos) {
		auto tag = read_tag(body, pos);
		if (!tag || tag->closing) {
			++pos;
			continue;
		}
		std::size_t frag_end = 0;
		bool is_void = std::find(void_tags.begin(), void_tags.end(), tag->name) != void_tags.end();
		if (tag->self_closing || is_void) {
			frag_end = tag->end;
		}
		else if (auto end = find_element_end(body, *tag)) {
			frag_end = *end;
		}
		else {
			++pos;
			continue;
		}
		emit(segment_kind::plain_text, seg_start, pos);
		emit(segment_kind::html_fragment, pos, frag_end);
		seg_start = pos = frag_end;
	}
	emit(segment_kind::plain_text, seg_start, body.size());
	return out;
}

auto parse_email(std::string_view raw) -> result<email_message, parse_diagnostic>
{
	std::map<std::string, header_line> headers;
	std::size_t pos = 0;
	std::optional<std::size_t> body_start;

	while (pos < raw.size()) {
		auto nl = raw.find('\n', pos);
		auto line_end = nl == std::string_view::npos ? raw.size() : nl;
		auto line = raw.substr(pos, line_end - pos);
		if (!line.empty() && line.back() == '\r') {
			line.remove_suffix(1);
		}
		auto next = nl == std::string_view::npos ? raw.size() : nl + 1;
		if (line.empty()) {
			body_start = next;
			break;
		}
		auto colon = line.find(':');
		if (colon == std::string_view::npos || text::trim(line.substr(0, colon)).empty()) {
			return diag(diagnostic_kind::missing_header, pos, "expected 'Name: value' header line");
		}
		auto name = text::to_lower(text::trim(line.substr(0, colon)));
		auto value = line.substr(colon + 1);
		auto value_lead = value.find_first_not_of(" \t");
		auto value_offset = pos + colon + 1 + (value_lead == std::string_view::npos ? value.size() : value_lead);
		value = text::trim(value);
		headers.try_emplace(name, header_line{value, value_offset});
		pos = next;
	}

	email_message msg;
	msg.raw = std::string{raw};

	auto require = [&](const char *name) -> const header_line * {
		auto it = headers.find(name);
		return it == headers.end() ? nullptr : &it->second;
	};

	const auto *from = require("from");
	if (from == nullptr) {
		return diag(diagnostic_kind::missing_header, 0, "missing From header");
	}
	const auto *subject = require("subject");
	if (subject == nullptr) {
		return diag(diagnostic_kind::missing_header, 0, "missing Subject header");
	}
	const auto *to = require("to");
	if (to == nullptr) {
		return diag(diagnostic_kind::missing_header, 0, "missing To header");
	}

	/* From: optional display name + <address>, or a bare address. A missing '>' is tolerated. */
	{
		auto value = from->value;
		auto lt = value.find('<');
		std::string_view addr = value;
		std::size_t addr_offset = from->value_offset;
		if (lt != std::string_view::npos) {
			auto gt = value.find('>', lt);
			auto inner_end = gt == std::string_view::npos ? value.size() : gt;
			addr = value.substr(lt + 1, inner_end - lt - 1);
			addr_offset = from->value_offset + lt + 1;
			auto display = value.substr(0, lt);
			auto display_trimmed = text::trim(display);
			auto display_offset = from->value_offset + (display_trimmed.data() - value.data());
			if (display_trimmed.size() >= 2 && display_trimmed.front() == '"' && display_trimmed.back() == '"') {
				display_trimmed = display_trimmed.substr(1, display_trimmed.size() - 2);
				display_offset += 1;
			}
			if (!display_trimmed.empty()) {
				msg.display_name = std::string{display_trimmed};
				msg.source["display_name"] = {display_offset, display_offset + display_trimmed.size()};
			}
		}
		auto trimmed = text::trim(addr);
		addr_offset += trimmed.data() - addr.data();
		auto parsed = parse_address(trimmed);
		if (!parsed) {
			return diag(diagnostic_kind::bad_address, addr_offset, "bad From address");
		}
		msg.from = std::move(*parsed);
		msg.source["from"] = {addr_offset, addr_offset + trimmed.size()};
	}

	auto plain_address = [&](const header_line &h, const char *field) -> std::optional<parse_diagnostic> {
		auto value = h.value;
		auto offset = h.value_offset;
		if (value.size() >= 2 && value.front() == '<' && value.back() == '>') {
			value = value.substr(1, value.size() - 2);
			offset += 1;
		}
		auto parsed = parse_address(value);
		if (!parsed) {
			return parse_diagnostic{diagnostic_kind::bad_address, offset, std::string{"bad "} + field + " address"};
		}
		if (std::string_view{field} == "to") {
			msg.to = std::move(*parsed);
		}
		else {
			msg.reply_to = std::move(*parsed);
		}
		msg.source[field] = {offset, offset + value.size()};
		return std::nullopt;
	};

	if (auto err = plain_address(*to, "to")) {
		return unexpected{std::move(*err)};
	}
	if (const auto *reply = require("reply-to")) {
		if (auto err = plain_address(*reply, "reply_to")) {
			return unexpected{std::move(*err)};
		}
	}

	msg.subject = std::string{subject->value};
	msg.source["subject"] = {subject->value_offset, subject->value_offset + subject->value.size()};

	if (!body_start || text::trim(raw.substr(*body_start)).empty()) {
		return diag(diagnostic_kind::empty_body, body_start.value_or(raw.size()), "message body is empty");
	}
	auto body = raw.substr(*body_start);
	msg.body = segment_body(body);
	std::size_t offset = *body_start;
	for (std::size_t i = 0; i < msg.body.size(); ++i) {
		auto len = msg.body[i].text.size();
		msg.source["body[" + std::to_string(i) + "]"] = {offset, offset + len};
		offset += len;
	}
	return msg;
}

auto email_message::body_text() const -> std::string
{
	std::string out;
	for (const auto &seg : body) {
		out += seg.text;
	}
	return out;
}

auto email_message::serialize() const -> std::string
{
	std::string out = "From: ";
	if (display_name) {
		out += *display_name + " <" + from.str() + ">";
	}
	else {
		out += from.str();
	}
	out += "\nTo: " + to.str() + "\n";
	if (reply_to) {
		out += "Reply-To: " + reply_to->str() + "\n";
	}
	out += "Subject: " + subject + "\n\n";
	out += body_text();
	return out;
}

}// namespace phinder
