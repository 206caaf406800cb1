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

#include <algorithm>

using namespace phinder;

namespace {

auto url_content(const std::string &s) -> worm_content
{
	return worm_content{parse_url(s).value()};
}

auto plain_email() -> worm_content
{
	return worm_content{parse_email("From: Shifu <shifu@pond.example>\nTo: johnny@pond.example\n"
									"Subject: Notes\n\nSee you at the reeds tomorrow.\n")
							.value()};
}

auto rules_of(const detection_report &r) -> std::multiset<std::string>
{
	std::multiset<std::string> out;
	for (const auto &f : r.findings) {
		out.insert(f.rule);
	}
	return out;
}

auto count_phishing(const std::vector<worm> &bank) -> long
{
	return std::count_if(bank.begin(), bank.end(), [](const worm &w) { return w.ground_truth() == label::phishing; });
}

}// namespace

TEST_CASE("mutate: lookalike on paypal picks the final 'l' with seed 2")
{
	auto out = mutate(phishing_concept::lookalike_domain, url_content("www.paypal.com"), default_brands(), rule_config{}, 2);
	REQUIRE(out.has_value());
	CHECK(std::get<url>(*out).raw == "www.paypa1.com");
}

TEST_CASE("mutate: lookalike on google picks the first 'o' with seed 0")
{
	auto out = mutate(phishing_concept::lookalike_domain, url_content("www.google.com"), default_brands(), rule_config{}, 0);
	REQUIRE(out.has_value());
	CHECK(std::get<url>(*out).raw == "www.g0ogle.com");
}

TEST_CASE("mutate: lookalike changes exactly one character of the brand label")
{
	const auto &brands = default_brands();
	for (auto s : {"www.paypal.com", "https://www.google.com/search?q=x", "https://www.netflix.com/browse",
				   "https://www.amazon.com.au/orders", "https://www.ebay.com/"}) {
		for (std::uint64_t seed = 0; seed < 20; ++seed) {
			auto before = std::get<url>(url_content(s));
			auto out = mutate(phishing_concept::lookalike_domain, worm_content{before}, brands, rule_config{}, seed);
			REQUIRE(out.has_value());
			const auto &after = std::get<url>(*out);
			auto b = registrable_label(before.host).label;
			auto a = registrable_label(after.host).label;
			std::size_t prefix = 0;
			while (prefix < b.size() && prefix < a.size() && a[prefix] == b[prefix]) {
				++prefix;
			}
			std::size_t suffix = 0;
			while (suffix < b.size() - prefix && suffix < a.size() - prefix &&
				   a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
				++suffix;
			}
			CAPTURE(a);
			CHECK(b.size() - prefix - suffix == 1);
			CHECK(after.path == before.path);
			CHECK(after.query == before.query);
			CHECK(detect(*out, brands, rule_config{}).concepts().contains(phishing_concept::lookalike_domain));
		}
	}
}

TEST_CASE("mutate: errors")
{
	const auto &brands = default_brands();
	auto inapplicable = mutate(phishing_concept::display_name_spoof, url_content("www.paypal.com"), brands, rule_config{}, 1);
	REQUIRE_FALSE(inapplicable.has_value());
	CHECK(inapplicable.error().kind == mutation_error_kind::inapplicable_concept);

	auto github = mutate(phishing_concept::lookalike_domain, url_content("https://github.com/explore"), brands, rule_config{}, 1);
	REQUIRE_FALSE(github.has_value());
	CHECK(github.error().kind == mutation_error_kind::no_mutable_position);

	auto not_brand = mutate(phishing_concept::lookalike_domain, url_content("www.example.org"), brands, rule_config{}, 1);
	REQUIRE_FALSE(not_brand.has_value());
	CHECK(not_brand.error().kind == mutation_error_kind::no_mutable_position);

	auto no_brand_link = mutate(phishing_concept::lookalike_domain, plain_email(), brands, rule_config{}, 1);
	REQUIRE_FALSE(no_brand_link.has_value());
	CHECK(no_brand_link.error().kind == mutation_error_kind::no_mutable_position);
}

TEST_CASE("mutate: HTML body adds exactly the HtmlBody finding")
{
	const auto &brands = default_brands();
	auto before = detect(plain_email(), brands, rule_config{});
	auto out = mutate(phishing_concept::html_body, plain_email(), brands, rule_config{}, 9);
	REQUIRE(out.has_value());
	const auto &msg = std::get<email_message>(*out);
	CHECK(std::count_if(msg.body.begin(), msg.body.end(),
						[](const body_segment &s) { return s.kind == segment_kind::html_fragment; }) == 1);
	auto after = detect(*out, brands, rule_config{});
	auto b = rules_of(before);
	auto a = rules_of(after);
	for (const auto &r : b) {
		a.erase(a.find(r));
	}
	CHECK(a == std::multiset<std::string>{std::string{rule_id::html_fragment}});

	for (const auto &item : bundled_corpus().items) {
		if (!std::holds_alternative<email_message>(item.content)) {
			continue;
		}
		CAPTURE(item.id);
		auto wrapped = mutate(phishing_concept::html_body, item.content, brands, rule_config{}, 3);
		REQUIRE(wrapped.has_value());
		CHECK(detect(*wrapped, brands, rule_config{}).concepts() == concept_set{phishing_concept::html_body});
	}
}

TEST_CASE("mutate: every operator yields its concept on every applicable corpus item")
{
	const auto &brands = default_brands();
	for (const auto &item : bundled_corpus().items) {
		for (auto c : all_concepts) {
			for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 17ULL, 123456789ULL}) {
				auto out = mutate(c, item.content, brands, rule_config{}, seed);
				if (!out) {
					CHECK((out.error().kind == mutation_error_kind::inapplicable_concept) == !concept_applies(c, item.content));
					continue;
				}
				CAPTURE(item.id);
				CAPTURE(to_string(c));
				CHECK(detect(*out, brands, rule_config{}).concepts().contains(c));
				auto again = mutate(c, item.content, brands, rule_config{}, seed);
				CHECK(content_text(*again) == content_text(*out));
			}
		}
	}
}

TEST_CASE("validate_corpus")
{
	const auto &brands = default_brands();
	corpus clean{{{"a", url_content("www.google.com")}, {"b", url_content("www.example.org")}}};
	CHECK(validate_corpus(clean, brands, rule_config{}).empty());

	corpus dirty{{{"a", url_content("www.google.com")}, {"b", url_content("www.g0ogle.com")}}};
	auto report = validate_corpus(dirty, brands, rule_config{});
	REQUIRE(report.size() == 1);
	CHECK(report[0].item_id == "b");
	CHECK(report[0].report.concepts() == concept_set{phishing_concept::lookalike_domain});

	auto spoofed = parse_email("From: a@bank.com\nTo: c@d.com\nReply-To: x@bank-refunds.com\nSubject: hi\n\nbody\n").value();
	corpus mail{{{"m", worm_content{spoofed}}}};
	auto mail_report = validate_corpus(mail, brands, rule_config{});
	REQUIRE(mail_report.size() == 1);
	CHECK(mail_report[0].report.concepts() == detect(worm_content{spoofed}, brands, rule_config{}).concepts());
	CHECK(mail_report[0].report.concepts() == concept_set{phishing_concept::reply_to_spoof});
}

TEST_CASE("corpus files")
{
	auto urls = parse_url_list("# comment\nwww.google.com\n\nhttps://bit.ly/x\n", "list").value();
	REQUIRE(urls.size() == 2);
	CHECK(urls[0].id == "list:2");
	CHECK(urls[1].id == "list:4");
	CHECK_FALSE(parse_url_list("http://\n", "bad").has_value());

	auto mails = parse_email_file("From: a@b.com\nTo: c@d.com\nSubject: one\n\nbody\n%%\n"
								  "From: a@b.com\nTo: c@d.com\nSubject: two\n\nbody\n",
								  "box")
					 .value();
	REQUIRE(mails.size() == 2);
	CHECK(mails[1].id == "box#2");
	CHECK(std::get<email_message>(mails[1].content).subject == "two");

	auto loaded = load_corpus(PHINDER_FIXTURE_DIR "/../../data/corpus");
	REQUIRE(loaded.has_value());
	CHECK(loaded->size() == bundled_corpus().size());
	for (std::size_t i = 0; i < loaded->size(); ++i) {
		CHECK(loaded->items[i].id == bundled_corpus().items[i].id);
	}
	CHECK_FALSE(load_corpus("/nonexistent/path").has_value());
}

TEST_CASE("generate_worm: replaying a seed yields identical worms")
{
	const auto &l1 = default_levels()[0];
	auto a = generate_bank(l1, 30, 42, bundled_corpus(), default_brands(), rule_config{}).value();
	auto b = generate_bank(l1, 30, 42, bundled_corpus(), default_brands(), rule_config{}).value();
	REQUIRE(a.size() == b.size());
	for (std::size_t i = 0; i < a.size(); ++i) {
		CHECK(bank_record(a[i]) == bank_record(b[i]));
		CHECK(a[i].id() == "w" + std::to_string(i + 1));
	}
	auto c = generate_bank(l1, 30, 43, bundled_corpus(), default_brands(), rule_config{}).value();
	bool differs = false;
	for (std::size_t i = 0; i < a.size(); ++i) {
		differs = differs || bank_record(a[i]) != bank_record(c[i]);
	}
	CHECK(differs);
}

TEST_CASE("generate_worm: phish_fraction 0 gives only legitimate worms")
{
	auto cfg = default_levels()[0];
	cfg.phish_fraction = {0, 1};
	auto bank = generate_bank(cfg, 200, 3, bundled_corpus(), default_brands(), rule_config{}).value();
	for (const auto &w : bank) {
		CHECK(w.ground_truth() == label::legitimate);
		CHECK(w.intended_concepts().empty());
	}
}

TEST_CASE("generate_worm: 1000 worms at phish_fraction 1/2 contain 450-550 phish")
{
	for (std::uint64_t seed : {1ULL, 2ULL, 42ULL}) {
		auto bank = generate_bank(default_levels()[0], 1000, seed, bundled_corpus(), default_brands(), rule_config{}).value();
		auto phish = count_phishing(bank);
		CAPTURE(seed);
		CHECK(phish >= 450);
		CHECK(phish <= 550);
	}
}

TEST_CASE("generate_bank defaults")
{
	auto a = generate_bank(1, 10, 42).value();
	auto b = generate_bank(1, 10, 42).value();
	for (std::size_t i = 0; i < a.size(); ++i) {
		CHECK(bank_record(a[i]) == bank_record(b[i]));
		CHECK_FALSE(a[i].intended_concepts().contains(phishing_concept::html_body));
	}
	auto l5 = generate_bank(5, 10, 42).value();
	for (const auto &w : l5) {
		if (w.ground_truth() == label::phishing) {
			CHECK(w.intended_concepts().size() == 2);
		}
	}
	CHECK_FALSE(generate_bank(6, 10, 42).has_value());
	CHECK_FALSE(generate_bank(0, 10, 42).has_value());
}

TEST_CASE("generate_worm: ExhaustedCorpus when no item fits the drawn concepts")
{
	auto cfg = default_levels()[0];
	cfg.allowed_concepts = {phishing_concept::reply_to_spoof};
	cfg.phish_fraction = {1, 1};
	corpus urls_only{{{"u", url_content("www.google.com")}}};
	auto out = generate_worm(cfg, urls_only, default_brands(), rule_config{}, {1, 0});
	REQUIRE_FALSE(out.has_value());
	CHECK(out.error().kind == generate_error_kind::exhausted_corpus);

	cfg.allowed_concepts = {phishing_concept::lookalike_domain};
	corpus github{{{"g", url_content("https://github.com/")}}};
	auto stuck = generate_worm(cfg, github, default_brands(), rule_config{}, {1, 0});
	REQUIRE_FALSE(stuck.has_value());
	CHECK(stuck.error().kind == generate_error_kind::exhausted_corpus);
}

TEST_CASE("property: provenance points at the source corpus item")
{
	std::map<std::string, const corpus_item *> by_id;
	for (const auto &item : bundled_corpus().items) {
		by_id[item.id] = &item;
	}
	for (int level = 1; level <= 5; ++level) {
		auto bank = generate_bank(level, 100, 11).value();
		for (const auto &w : bank) {
			REQUIRE(by_id.contains(w.origin().corpus_item_id));
			const auto *item = by_id[w.origin().corpus_item_id];
			CHECK(std::holds_alternative<email_message>(item->content) == w.is_email());
			if (w.ground_truth() == label::legitimate) {
				CHECK(w.display_text() == content_text(item->content));
			}
		}
	}
}

TEST_CASE("level config file")
{
	auto kv = key_values::parse("level.1.worm_count = 4\nlevel.1.phish_fraction = 3/4\nlevel.2.concepts = html_body\n").value();
	auto levels = load_levels(kv).value();
	REQUIRE(levels.size() == 5);
	CHECK(levels[0].worm_count == 4);
	CHECK(levels[0].phish_fraction == ratio{3, 4});
	CHECK(levels[0].time_limit == std::chrono::seconds{600});
	CHECK(levels[1].allowed_concepts == concept_set{phishing_concept::html_body});

	CHECK_FALSE(load_levels(key_values::parse("level.1.concepts_per_phish = 3\n").value()).has_value());
	CHECK_FALSE(load_levels(key_values::parse("level.1.concepts = nonsense\n").value()).has_value());
	CHECK(load_levels(key_values::parse("levels = 2\n").value())->size() == 2);
}
