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
#include "phinder/config.hpp"
#include "phinder/detector.hpp"
#include "phinder/generator.hpp"
#include "phinder/parser.hpp"
#include "support.hpp"

#include <algorithm>
#include <random>

using namespace phinder;

namespace {

auto url_of(const std::string &s) -> worm_content
{
	return worm_content{parse_url(s).value()};
}

auto email_of(const std::string &s) -> email_message
{
	return parse_email(s).value();
}

auto simple_email(const std::string &headers, const std::string &body = "Hello there.\n") -> email_message
{
	return email_of(headers + "\n" + body);
}

/* Oracle for the subject rule: plain character scan and substring search, no shared code. */
struct subject_oracle {
	int marks = 0;
	std::vector<std::string> keywords;
};

auto scan_subject(const std::string &subject, const rule_config &cfg) -> subject_oracle
{
	subject_oracle out;
	std::string lowered;
	for (char c : subject) {
		out.marks += (c == '!' || c == '?') ? 1 : 0;
		lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	}
	for (const auto &k : cfg.urgency_keywords) {
		if (lowered.find(k) != std::string::npos) {
			out.keywords.push_back(k);
		}
	}
	return out;
}

auto concept_list(const detection_report &r) -> std::vector<phishing_concept>
{
	std::vector<phishing_concept> out;
	for (const auto &f : r.findings) {
		out.push_back(f.concept_id);
	}
	return out;
}

}// namespace

TEST_CASE("concept catalog order and determinism")
{
	const auto &cat = concept_catalog();
	REQUIRE(cat.size() == 6);
	CHECK(cat.front().id == phishing_concept::malicious_url);
	CHECK(cat.back().id == phishing_concept::html_body);
	const auto &again = concept_catalog();
	for (std::size_t i = 0; i < cat.size(); ++i) {
		CHECK(cat[i].id == again[i].id);
		CHECK(cat[i].description == again[i].description);
		CHECK(catalog_index(cat[i].id) == i);
		CHECK(concept_from_string(to_string(cat[i].id)) == cat[i].id);
	}
}

TEST_CASE("detect: paypa1 is a lookalike with evidence on the '1'")
{
	auto content = url_of("www.paypa1.com");
	auto report = detect(content, default_brands(), rule_config{});
	CHECK(report.verdict == label::phishing);
	REQUIRE(report.findings.size() == 1);
	const auto &f = report.findings[0];
	CHECK(f.concept_id == phishing_concept::lookalike_domain);
	CHECK(f.span.field == "host");
	CHECK(field_text(content, "host")->substr(f.span.start, f.span.end - f.span.start) == "1");
	CHECK(f.params.at("brand") == "paypal");
	CHECK(f.params.at("original") == "l");
	CHECK(report.advice[0] == "the 'l' in \"paypal\" has been changed to a '1'");
}

TEST_CASE("detect: genuine brand domains are clean")
{
	for (auto s : {"www.google.com", "www.paypal.com", "https://accounts.google.com/x", "github.com"}) {
		CAPTURE(s);
		auto report = detect(url_of(s), default_brands(), rule_config{});
		CHECK(report.verdict == label::legitimate);
		CHECK(report.findings.empty());
		CHECK(report.advice.empty());
	}
}

TEST_CASE("detect: Podesta HTML variant equals the union of the individual rules")
{
	auto msg = email_of(testing::fixture("podesta_html.eml"));
	rule_config cfg;
	const auto &brands = default_brands();
	auto report = detect(worm_content{msg}, brands, cfg);

	std::vector<evidence> expected;
	for (std::size_t i = 0; i < msg.body.size(); ++i) {
		for (std::size_t j = 0; j < msg.body[i].urls.size(); ++j) {
			auto field = "body[" + std::to_string(i) + "].urls[" + std::to_string(j) + "].host";
			for (auto &e : rule_malicious_url(msg.body[i].urls[j].link, brands, cfg, field)) {
				expected.push_back(e);
			}
			for (auto &e : rule_lookalike(msg.body[i].urls[j].link, brands, cfg, field)) {
				expected.push_back(e);
			}
		}
	}
	for (auto &e : rule_suspicious_subject(msg, cfg)) {
		expected.push_back(e);
	}
	for (auto &e : rule_display_spoof(msg, brands)) {
		expected.push_back(e);
	}
	for (auto &e : rule_replyto_spoof(msg)) {
		expected.push_back(e);
	}
	for (auto &e : rule_html_body(msg)) {
		expected.push_back(e);
	}
	std::vector<std::string> expected_rules;
	for (const auto &e : expected) {
		expected_rules.push_back(e.rule);
	}
	std::vector<std::string> got_rules;
	for (const auto &e : report.findings) {
		got_rules.push_back(e.rule);
	}
	std::sort(expected_rules.begin(), expected_rules.end());
	std::sort(got_rules.begin(), got_rules.end());
	CHECK(got_rules == expected_rules);

	CHECK(report.verdict == label::phishing);
	CHECK(concept_list(report) == std::vector{phishing_concept::malicious_url, phishing_concept::suspicious_subject,
											  phishing_concept::html_body});
	CHECK(report.findings[0].rule == rule_id::shortener);
	CHECK(report.findings[1].params.at("keyword") == "password");
}

TEST_CASE("detect: Podesta plain variant has no HTML finding")
{
	auto report = detect(worm_content{email_of(testing::fixture("podesta_plain.eml"))}, default_brands(), rule_config{});
	CHECK(concept_list(report) == std::vector{phishing_concept::malicious_url, phishing_concept::suspicious_subject});
}

TEST_CASE("rule_malicious_url sub-rules")
{
	rule_config cfg;
	const auto &brands = default_brands();
	auto rules_of = [&](const std::string &s) {
		std::vector<std::string> out;
		for (const auto &e : rule_malicious_url(parse_url(s).value(), brands, cfg)) {
			out.push_back(e.rule);
		}
		return out;
	};
	CHECK(rules_of("http://203.0.113.9/login") == std::vector<std::string>{std::string{rule_id::ip_literal}});
	CHECK(rules_of("paypal-secure.com") == std::vector<std::string>{std::string{rule_id::brand_hyphen}});
	CHECK(rules_of("https://bit.ly/abc") == std::vector<std::string>{std::string{rule_id::shortener}});
	CHECK(rules_of("www.123bank.com") == std::vector<std::string>{std::string{rule_id::leading_digit}});
	CHECK(rules_of("7eleven.com") == std::vector<std::string>{std::string{rule_id::leading_digit}});
	CHECK(rules_of("www.example.org").empty());
	CHECK(rules_of("secure-paypal.com").empty());

	auto e = rule_malicious_url(parse_url("www.paypal-secure.com").value(), brands, cfg);
	REQUIRE(e.size() == 1);
	CHECK(std::string{"www.paypal-secure.com"}.substr(e[0].span.start, e[0].span.end - e[0].span.start) == "paypal-");
}

TEST_CASE("leading-digit rule is suppressed when a lookalike covers the label")
{
	rule_config cfg;
	auto report = detect(url_of("www.3bay.com"), default_brands(), cfg);
	CHECK(concept_list(report) == std::vector{phishing_concept::lookalike_domain});
	auto report2 = detect(url_of("www.0utlook.com"), default_brands(), cfg);
	CHECK(concept_list(report2) == std::vector<phishing_concept>{phishing_concept::malicious_url});
}

TEST_CASE("rule_lookalike examples")
{
	rule_config cfg;
	const auto &brands = default_brands();
	auto g = rule_lookalike(parse_url("www.g0ogle.com").value(), brands, cfg);
	REQUIRE(g.size() == 1);
	CHECK(g[0].params.at("brand") == "google");
	CHECK(g[0].span.start == 5);
	CHECK(g[0].span.end == 6);

	auto p = rule_lookalike(parse_url("www.paypa1.com").value(), brands, cfg);
	REQUIRE(p.size() == 1);
	CHECK(p[0].span.start == 9);

	CHECK(rule_lookalike(parse_url("www.paypal.com").value(), brands, cfg).empty());
	CHECK(rule_lookalike(parse_url("http://203.0.113.9/").value(), brands, cfg).empty());

	auto multi = rule_lookalike(parse_url("www.g00gle.com").value(), brands, cfg);
	CHECK(multi.size() == 2);

	auto vv = rule_lookalike(parse_url("www.p@ypal.com").value(), brands, cfg);
	REQUIRE(vv.size() == 1);
	CHECK(vv[0].params.at("substitute") == "@");
}

TEST_CASE("rule_suspicious_subject against a brute-force scan")
{
	rule_config cfg;
	struct row {
		const char *subject;
		std::size_t expected;
	};
	for (auto [subject, expected] : {row{"URGENT!!! Verify your account", 3}, row{"Someone has your password", 1},
									 row{"Lunch on Friday?", 0}, row{"What?! Really?!", 1},
									 row{"Please act NOW about your Account Number", 2}, row{"", 0}}) {
		CAPTURE(subject);
		auto msg = simple_email(std::string{"From: a@b.com\nTo: c@d.com\nSubject: "} + subject + "\n");
		auto found = rule_suspicious_subject(msg, cfg);
		auto oracle = scan_subject(msg.subject, cfg);
		auto oracle_count = oracle.keywords.size() + (oracle.marks >= cfg.punctuation_threshold ? 1 : 0);
		CHECK(found.size() == oracle_count);
		CHECK(found.size() == expected);
		for (const auto &e : found) {
			auto slice = msg.subject.substr(e.span.start, e.span.end - e.span.start);
			CHECK_FALSE(slice.empty());
			if (e.rule == rule_id::keyword) {
				CHECK(std::find(oracle.keywords.begin(), oracle.keywords.end(), e.params.at("keyword")) !=
					  oracle.keywords.end());
			}
			else {
				CHECK(std::count_if(slice.begin(), slice.end(), [](char c) { return c == '!' || c == '?'; }) ==
					  oracle.marks);
			}
		}
	}
}

TEST_CASE("rule_display_spoof")
{
	const auto &brands = default_brands();
	auto fig = email_of(testing::fixture("podesta_plain.eml"));
	CHECK(rule_display_spoof(fig, brands).empty());

	auto spoof = simple_email("From: Google <support@secure-login.ru>\nTo: c@d.com\nSubject: hi\n");
	auto found = rule_display_spoof(spoof, brands);
	REQUIRE(found.size() == 1);
	CHECK(brands.find("google")->legitimate_domains.count("secure-login.ru") == 0);
	CHECK(spoof.from.str().substr(found[0].span.start, found[0].span.end - found[0].span.start) == "secure-login.ru");

	auto anonymous = simple_email("From: support@secure-login.ru\nTo: c@d.com\nSubject: hi\n");
	CHECK(rule_display_spoof(anonymous, brands).empty());

	auto spaced = simple_email("From: \"  google \" <x@evil.example>\nTo: c@d.com\nSubject: hi\n");
	CHECK(rule_display_spoof(spaced, brands).size() == 1);
}

TEST_CASE("rule_replyto_spoof")
{
	auto mismatch = simple_email("From: a@bank.com\nTo: c@d.com\nReply-To: refunds@bank-refunds.com\nSubject: hi\n");
	auto found = rule_replyto_spoof(mismatch);
	REQUIRE(found.size() == 1);
	CHECK(registrable_domain(mismatch.from.domain) != registrable_domain(mismatch.reply_to->domain));
	CHECK(found[0].span.start == 0);
	CHECK(found[0].span.end == mismatch.reply_to->str().size());

	CHECK(rule_replyto_spoof(simple_email("From: a@bank.com\nTo: c@d.com\nSubject: hi\n")).empty());
	CHECK(rule_replyto_spoof(simple_email("From: a@bank.com\nTo: c@d.com\nReply-To: support@bank.com\nSubject: hi\n"))
			  .empty());
	CHECK(rule_replyto_spoof(simple_email("From: a@mail.bank.com\nTo: c@d.com\nReply-To: b@bank.com\nSubject: hi\n"))
			  .empty());
}

TEST_CASE("rule_html_body counts fragments")
{
	auto headers = std::string{"From: a@b.com\nTo: c@d.com\nSubject: hi\n"};
	CHECK(rule_html_body(simple_email(headers, "just text\n")).empty());
	CHECK(rule_html_body(simple_email(headers, "text then <b>bold</b>\n")).size() == 1);
	auto two = simple_email(headers, "<p>one</p> and <i>two</i>\n");
	auto html_segments = std::count_if(two.body.begin(), two.body.end(),
									   [](const body_segment &s) { return s.kind == segment_kind::html_fragment; });
	CHECK(rule_html_body(two).size() == static_cast<std::size_t>(html_segments));
	CHECK(html_segments == 2);
}

TEST_CASE("advice_for reproduces the three expert messages")
{
	rule_config cfg;
	const auto &brands = default_brands();
	auto hyphen = rule_malicious_url(parse_url("paypal-secure.com").value(), brands, cfg);
	REQUIRE(hyphen.size() == 1);
	CHECK(advice_for(hyphen[0]) == "a company name followed by a hyphen in a URL is generally a scam");

	auto digit = rule_malicious_url(parse_url("www.123bank.com").value(), brands, cfg);
	REQUIRE(digit.size() == 1);
	CHECK(advice_for(digit[0]) == "website addresses associated with numbers in the front are generally scams");

	auto msg = simple_email("From: a@b.com\nTo: c@d.com\nSubject: Please confirm your account number\n");
	auto kw = rule_suspicious_subject(msg, cfg);
	REQUIRE(kw.size() == 1);
	CHECK(advice_for(kw[0]) == "your bank will not send an email to ask you about your account number");
}

TEST_CASE("advice_for is total over every concept")
{
	for (auto c : all_concepts) {
		evidence e{c, "unknown.rule", {"host", 0, 1}, "", {}};
		CHECK_FALSE(advice_for(e).empty());
	}
}

TEST_CASE("property: detect is deterministic and spans are valid")
{
	std::vector<worm_content> contents;
	for (const auto &item : bundled_corpus().items) {
		contents.push_back(item.content);
	}
	for (auto s : {"www.paypa1.com", "www.g0ogle.com", "http://203.0.113.9/", "paypal-login.com", "bit.ly/x",
				   "www.123bank.com", "www.g00gle.co.uk"}) {
		contents.push_back(url_of(s));
	}
	contents.emplace_back(email_of(testing::fixture("podesta_html.eml")));
	contents.emplace_back(email_of(testing::fixture("podesta_plain.eml")));

	for (int level = 1; level <= 5; ++level) {
		auto bank = generate_bank(level, 40, 7).value();
		for (const auto &w : bank) {
			contents.push_back(w.content());
		}
	}

	for (const auto &c : contents) {
		auto a = detect(c, default_brands(), rule_config{});
		auto b = detect(c, default_brands(), rule_config{});
		REQUIRE(a.findings.size() == b.findings.size());
		CHECK(a.advice == b.advice);
		CHECK(a.advice.size() == a.findings.size());
		CHECK((a.verdict == label::phishing) == !a.findings.empty());
		for (std::size_t i = 0; i < a.findings.size(); ++i) {
			const auto &f = a.findings[i];
			CHECK(f.rule == b.findings[i].rule);
			CHECK(f.detail == b.findings[i].detail);
			CHECK(f.span.start < f.span.end);
			auto text = field_text(c, f.span.field);
			REQUIRE(text.has_value());
			CHECK(f.span.end <= text->size());
			if (i > 0) {
				CHECK(catalog_index(a.findings[i - 1].concept_id) <= catalog_index(f.concept_id));
			}
			if (f.rule == rule_id::homoglyph) {
				CHECK(text->substr(f.span.start, f.span.end - f.span.start) == f.params.at("substitute"));
			}
		}
	}
}

TEST_CASE("property: adding an HTML fragment never removes findings")
{
	std::mt19937 rng(5);
	std::vector<std::string> raws{testing::fixture("podesta_plain.eml")};
	for (const auto &item : bundled_corpus().items) {
		if (const auto *m = std::get_if<email_message>(&item.content)) {
			raws.push_back(m->raw);
		}
	}
	const std::vector<std::string> fragments{"<b>hi</b>", "<br>", "<a href=\"https://www.example.org/\">x</a>",
											 "<a href=\"http://203.0.113.5/\">y</a>", "<img src=\"p.png\"/>"};
	for (const auto &raw : raws) {
		for (int k = 0; k < 5; ++k) {
			auto before = detect(worm_content{email_of(raw)}, default_brands(), rule_config{});
			auto augmented = raw + "\n" + fragments[rng() % fragments.size()] + "\n";
			auto after = detect(worm_content{email_of(augmented)}, default_brands(), rule_config{});
			std::multiset<std::string> b_rules;
			std::multiset<std::string> a_rules;
			for (const auto &f : before.findings) {
				b_rules.insert(f.rule);
			}
			for (const auto &f : after.findings) {
				a_rules.insert(f.rule);
			}
			CHECK(std::includes(a_rules.begin(), a_rules.end(), b_rules.begin(), b_rules.end()));
			CHECK(after.concepts().contains(phishing_concept::html_body));
		}
	}
}

TEST_CASE("bundled corpus is detector-clean")
{
	auto report = validate_corpus(bundled_corpus(), default_brands(), rule_config{});
	for (const auto &entry : report) {
		MESSAGE(entry.item_id << ": " << entry.report.findings.front().detail);
	}
	CHECK(report.empty());
}

TEST_CASE("brand directory validation")
{
	auto dup = brand_directory::create({{"acme", {"acme.com"}, {}, {}}, {"acme", {"acme.org"}, {}, {}}});
	CHECK_FALSE(dup.has_value());
	auto stray = brand_directory::create({{"acme", {"other.com"}, {}, {}}});
	CHECK_FALSE(stray.has_value());
	auto listed = brand_directory::create({{"acme", {"other.com"}, {}, {"other.com"}}});
	CHECK(listed.has_value());
}

TEST_CASE("rule and brand config files")
{
	auto kv = key_values::parse("# rules\npunctuation_threshold = 2\nurgency_keywords = Now, hurry\n"
								"shortener_domains = sho.rt\nhomoglyphs = 0:o, vv:w\n"
								"brand.acme.domains = acme.com, acme-mail.com\nbrand.acme.display_names = ACME\n")
				  .value();
	auto cfg = load_rules(kv).value();
	CHECK(cfg.punctuation_threshold == 2);
	CHECK(cfg.urgency_keywords == std::vector<std::string>{"now", "hurry"});
	CHECK(cfg.shortener_domains == std::set<std::string>{"sho.rt"});
	REQUIRE(cfg.homoglyph_map.size() == 2);
	CHECK(cfg.homoglyph_map[1].substitute == "vv");
	auto brands = load_brands(kv).value();
	REQUIRE(brands.entries().size() == 1);
	CHECK(brands.find("acme")->expected_display_names.count("ACME") == 1);

	CHECK_FALSE(load_rules(key_values::parse("punctuation_threshold = 0\n").value()).has_value());
	CHECK_FALSE(load_rules(key_values::parse("homoglyphs = 0:9\n").value()).has_value());
	CHECK_FALSE(key_values::parse("no equals sign\n").has_value());
	CHECK(load_brands(key_values::parse("").value())->entries().size() == default_brands().entries().size());
}
