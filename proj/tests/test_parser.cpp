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

#include "doctest.h"
#include "phinder/generator.hpp"
#include "phinder/parser.hpp"
#include "support.hpp"

#include <arpa/inet.h>

#include <random>

using namespace phinder;

namespace {

/* Independent oracle: the C library's dotted-quad parser. */
auto inet_oracle(const std::string &host) -> bool
{
	in_addr addr{};
	return inet_pton(AF_INET, host.c_str(), &addr) == 1;
}

/* Independent oracle: walk the suffix list and keep one label more than the matched suffix. */
auto registrable_oracle(const std::string &host) -> std::string
{
	std::size_t suffix_labels = 1;
	for (auto s : two_level_suffixes()) {
		auto dotted = "." + std::string{s};
		if (host.size() > dotted.size() && host.compare(host.size() - dotted.size(), dotted.size(), dotted) == 0) {
			suffix_labels = 2;
		}
	}
	std::vector<std::string> labels;
	std::stringstream ss(host);
	for (std::string part; std::getline(ss, part, '.');) {
		labels.push_back(part);
	}
	if (labels.size() <= suffix_labels + 1) {
		return host;
	}
	std::string out;
	for (auto i = labels.size() - suffix_labels - 1; i < labels.size(); ++i) {
		out += (out.empty() ? "" : ".") + labels[i];
	}
	return out;
}

}// namespace

TEST_CASE("parse_url: bare host defaults to http with root path")
{
	auto u = parse_url("www.g0ogle.com");
	REQUIRE(u.has_value());
	CHECK(u->scheme == "http");
	CHECK(u->host == "www.g0ogle.com");
	CHECK(u->kind == host_kind::dns_name);
	CHECK(u->path == "/");
	CHECK_FALSE(u->query.has_value());
}

TEST_CASE("parse_url: shortened link keeps path")
{
	auto u = parse_url("https://bit.ly/1P1bsu0");
	REQUIRE(u.has_value());
	CHECK(u->scheme == "https");
	CHECK(u->host == "bit.ly");
	CHECK(u->path == "/1P1bsu0");
}

TEST_CASE("parse_url: empty host is malformed at the host offset")
{
	auto u = parse_url("http://");
	REQUIRE_FALSE(u.has_value());
	CHECK(u.error().kind == diagnostic_kind::malformed_url);
	CHECK(u.error().position == 7);
}

TEST_CASE("parse_url: IP host classified as literal")
{
	auto u = parse_url("http://203.0.113.9/login");
	REQUIRE(u.has_value());
	CHECK(u->kind == host_kind::ipv4_literal);
	CHECK(inet_oracle(u->host));
}

TEST_CASE("parse_url: normalization, ports and queries")
{
	auto u = parse_url("  HTTPS://WWW.Example.ORG:8443/A/b?x=1#frag ");
	REQUIRE(u.has_value());
	CHECK(u->scheme == "https");
	CHECK(u->host == "www.example.org");
	CHECK(u->port == 8443);
	CHECK(u->path == "/A/b");
	CHECK(u->query == "x=1");
	CHECK(u->serialize() == "https://www.example.org:8443/A/b?x=1");
	CHECK(u->raw.substr(u->host_offset, u->host.size()) == "WWW.Example.ORG");

	CHECK_FALSE(parse_url("").has_value());
	CHECK_FALSE(parse_url("http://host:0/").has_value());
	CHECK_FALSE(parse_url("http://host:70000/").has_value());
	CHECK_FALSE(parse_url("http://a..b/").has_value());
	CHECK_FALSE(parse_url("http://exa mple.com/").has_value());
	CHECK(parse_url("www.p@ypal.com").has_value());
}

TEST_CASE("is_ipv4_literal agrees with inet_pton")
{
	const std::vector<std::string> hosts{
		"203.0.113.9", "0.0.0.0", "255.255.255.255", "256.1.1.1", "1.2.3", "1.2.3.4.5", "01.2.3.4",
		"1.2.3.04", "a.b.c.d", "1..2.3", "192.168.1.1", "10.0.0.256", "134.249.139.239", "www.google.com",
		"1.2.3.-4", "1234.1.1.1", "",
	};
	for (const auto &h : hosts) {
		CAPTURE(h);
		CHECK(is_ipv4_literal(h) == inet_oracle(h));
	}

	std::mt19937 rng(1234);
	for (int i = 0; i < 20000; ++i) {
		std::string h;
		auto parts = 3 + rng() % 3;
		for (unsigned p = 0; p < parts; ++p) {
			if (p != 0) {
				h += '.';
			}
			auto kind = rng() % 10;
			if (kind == 0) {
				h += "0" + std::to_string(rng() % 100);
			}
			else if (kind == 1) {
				h += std::to_string(200 + rng() % 100);
			}
			else if (kind == 2) {
				h += "x";
			}
			else {
				h += std::to_string(rng() % 256);
			}
		}
		CAPTURE(h);
		REQUIRE(is_ipv4_literal(h) == inet_oracle(h));
	}
}

TEST_CASE("registrable_domain")
{
	CHECK(registrable_domain("www.g0ogle.com") == "g0ogle.com");
	CHECK(registrable_domain("example.com") == "example.com");
	CHECK(registrable_domain("mail.bank.com.au") == "bank.com.au");
	CHECK(registrable_domain("localhost") == "localhost");
	CHECK(registrable_domain("com.au") == "com.au");

	for (auto host : {"a.b.c.d.co.uk", "news.bbc.co.uk", "x.y.z", "bank.com.au", "deep.sub.ebay.com.au", "t.co",
					  "mail.google.com", "www.abc.net.au", "co.uk.example.com"}) {
		CAPTURE(host);
		CHECK(registrable_domain(host) == registrable_oracle(host));
	}
	auto lbl = registrable_label("mail.bank.com.au");
	CHECK(lbl.label == "bank");
	CHECK(lbl.offset == 5);
}

TEST_CASE("parse_email: Podesta message verbatim")
{
	auto raw = testing::fixture("podesta_plain.eml");
	auto msg = parse_email(raw);
	REQUIRE(msg.has_value());
	CHECK(msg->display_name == "Google");
	CHECK(msg->from.local == "no-reply");
	CHECK(msg->from.domain == "accounts.googlemail.com");
	CHECK(msg->subject == "Someone has your password");
	CHECK(msg->to.str() == "[redacted]@gmail.com");
	REQUIRE(msg->body.size() == 1);
	CHECK(msg->body[0].kind == segment_kind::plain_text);
	REQUIRE(msg->body[0].urls.size() == 1);
	CHECK(msg->body[0].urls[0].link.host == "bit.ly");
}

TEST_CASE("parse_email: HTML anchor becomes a fragment with its href")
{
	auto msg = parse_email(testing::fixture("podesta_html.eml"));
	REQUIRE(msg.has_value());
	REQUIRE(msg->body.size() == 3);
	CHECK(msg->body[0].kind == segment_kind::plain_text);
	CHECK(msg->body[1].kind == segment_kind::html_fragment);
	CHECK(msg->body[1].text == "<a href=\"https://bit.ly/1P1bsu0\">here</a>");
	REQUIRE(msg->body[1].urls.size() == 1);
	CHECK(msg->body[1].urls[0].link.host == "bit.ly");
	CHECK(msg->body[1].urls[0].link.path == "/1P1bsu0");
	CHECK(msg->body[0].urls.empty());
}

TEST_CASE("parse_email: errors")
{
	SUBCASE("missing subject")
	{
		auto msg = parse_email("From: a@b.com\nTo: c@d.com\n\nhello\n");
		REQUIRE_FALSE(msg.has_value());
		CHECK(msg.error().kind == diagnostic_kind::missing_header);
	}
	SUBCASE("missing from")
	{
		auto msg = parse_email("To: c@d.com\nSubject: hi\n\nhello\n");
		REQUIRE_FALSE(msg.has_value());
		CHECK(msg.error().kind == diagnostic_kind::missing_header);
	}
	SUBCASE("bad address")
	{
		auto raw = std::string{"From: Someone <nobody-at-all>\nTo: c@d.com\nSubject: hi\n\nhello\n"};
		auto msg = parse_email(raw);
		REQUIRE_FALSE(msg.has_value());
		CHECK(msg.error().kind == diagnostic_kind::bad_address);
		CHECK(msg.error().position == raw.find("nobody"));
	}
	SUBCASE("empty body")
	{
		auto msg = parse_email("From: a@b.com\nTo: c@d.com\nSubject: hi\n\n  \n");
		REQUIRE_FALSE(msg.has_value());
		CHECK(msg.error().kind == diagnostic_kind::empty_body);
	}
	SUBCASE("no blank line")
	{
		auto msg = parse_email("From: a@b.com\nTo: c@d.com\nSubject: hi\n");
		REQUIRE_FALSE(msg.has_value());
		CHECK(msg.error().kind == diagnostic_kind::empty_body);
	}
	SUBCASE("header line without colon")
	{
		auto msg = parse_email("From a@b.com\nSubject: hi\n\nbody\n");
		REQUIRE_FALSE(msg.has_value());
		CHECK(msg.error().kind == diagnostic_kind::missing_header);
	}
}

TEST_CASE("segment_body: void, self-closing, unmatched and nested tags")
{
	auto segs = segment_body("a <br> b <img src=\"x\"/> c <b>bold <b>x</b></b> d <p>open e <https://x.com/>");
	std::vector<std::string> texts;
	std::string joined;
	for (const auto &s : segs) {
		joined += s.text;
		if (s.kind == segment_kind::html_fragment) {
			texts.push_back(s.text);
		}
	}
	CHECK(joined == "a <br> b <img src=\"x\"/> c <b>bold <b>x</b></b> d <p>open e <https://x.com/>");
	REQUIRE(texts.size() == 3);
	CHECK(texts[0] == "<br>");
	CHECK(texts[1] == "<img src=\"x\"/>");
	CHECK(texts[2] == "<b>bold <b>x</b></b>");
	CHECK(segs.back().kind == segment_kind::plain_text);
	REQUIRE(segs.back().urls.size() == 1);
	CHECK(segs.back().urls[0].link.host == "x.com");
}

TEST_CASE("property: corpus URLs round-trip through serialize")
{
	for (const auto &item : bundled_corpus().items) {
		if (const auto *u = std::get_if<url>(&item.content)) {
			CAPTURE(item.id);
			auto again = parse_url(u->serialize());
			REQUIRE(again.has_value());
			CHECK(*again == *u);
			auto reparsed_raw = parse_url(u->raw);
			REQUIRE(reparsed_raw.has_value());
			CHECK(*reparsed_raw == *u);
			CHECK(parse_url(again->serialize())->serialize() == again->serialize());
		}
	}
}

TEST_CASE("property: generated URLs round-trip and normalization is idempotent")
{
	std::mt19937_64 rng(99);
	const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789-";
	auto word = [&](std::size_t min_len) {
		std::string w;
		auto len = min_len + rng() % 8;
		w += static_cast<char>('a' + rng() % 26);
		while (w.size() < len) {
			w += alphabet[rng() % alphabet.size()];
		}
		return w;
	};
	for (int i = 0; i < 5000; ++i) {
		std::string raw;
		if (rng() % 2 == 0) {
			raw += rng() % 2 ? "https://" : "HTTP://";
		}
		auto labels = 1 + rng() % 4;
		for (unsigned l = 0; l < labels; ++l) {
			raw += (l ? "." : "") + word(1);
		}
		if (rng() % 4 == 0) {
			raw += ":" + std::to_string(1 + rng() % 65535);
		}
		if (rng() % 2 == 0) {
			raw += "/" + word(0);
		}
		if (rng() % 3 == 0) {
			raw += "?q=" + word(0);
		}
		CAPTURE(raw);
		auto u = parse_url(raw);
		REQUIRE(u.has_value());
		auto once = parse_url(u->serialize());
		REQUIRE(once.has_value());
		CHECK(*once == *u);
		CHECK(once->serialize() == u->serialize());
	}
}

TEST_CASE("property: email source spans slice the raw text to the field")
{
	std::vector<std::string> raws{testing::fixture("podesta_plain.eml"), testing::fixture("podesta_html.eml")};
	for (const auto &item : bundled_corpus().items) {
		if (const auto *m = std::get_if<email_message>(&item.content)) {
			raws.push_back(m->raw);
		}
	}
	for (const auto &raw : raws) {
		auto msg = parse_email(raw);
		REQUIRE(msg.has_value());
		auto slice = [&](const char *field) {
			auto span = msg->source.at(field);
			return raw.substr(span.start, span.end - span.start);
		};
		CHECK(slice("from") == msg->from.str());
		CHECK(slice("to") == msg->to.str());
		CHECK(slice("subject") == msg->subject);
		if (msg->display_name) {
			CHECK(slice("display_name") == *msg->display_name);
		}
		if (msg->reply_to) {
			CHECK(slice("reply_to") == msg->reply_to->str());
		}
		for (std::size_t i = 0; i < msg->body.size(); ++i) {
			auto key = "body[" + std::to_string(i) + "]";
			CHECK(slice(key.c_str()) == msg->body[i].text);
			for (const auto &link : msg->body[i].urls) {
				CHECK(msg->body[i].text.substr(link.offset, link.link.raw.size()) == link.link.raw);
			}
		}
		auto again = parse_email(msg->serialize());
		REQUIRE(again.has_value());
		CHECK(again->serialize() == msg->serialize());
	}
}
