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
 * Explainable rule engine. Every rule returns evidence pointing at the exact
 * bytes that triggered it; advice_for turns evidence into Shifu's message.
 */

#ifndef PHINDER_DETECTOR_HPP
#define PHINDER_DETECTOR_HPP

#include "phinder/model.hpp"
#include "phinder/result.hpp"

#include <set>
#include <string>
#include <vector>

namespace phinder {

struct brand_entry {
	/* Lowercase token, e.g. "paypal". */
	std::string brand;
	std::set<std::string> legitimate_domains;
	std::set<std::string> expected_display_names;
	/* Legitimate domains allowed without containing the brand token ("googlemail.com"). */
	std::set<std::string> whitelisted_domains;
};

class brand_directory {
public:
	brand_directory() = default;

	/* Rejects duplicate brands and legitimate domains that neither contain the token nor are whitelisted. */
	static auto create(std::vector<brand_entry> entries) -> result<brand_directory, std::string>;

	[[nodiscard]] auto entries() const -> const std::vector<brand_entry> & { return entries_; }
	[[nodiscard]] auto find(std::string_view brand) const -> const brand_entry *;
	/* Case-insensitive, trimmed match against expected display names. */
	[[nodiscard]] auto find_by_display_name(std::string_view name) const -> const brand_entry *;
	/* Brand owning a registrable domain, if any. */
	[[nodiscard]] auto find_by_domain(std::string_view registrable) const -> const brand_entry *;

private:
	std::vector<brand_entry> entries_;
};

struct homoglyph {
	std::string substitute;
	char canonical;
};

struct rule_config {
	std::vector<homoglyph> homoglyph_map{
		{"0", 'o'}, {"1", 'l'}, {"3", 'e'}, {"5", 's'}, {"@", 'a'}, {"vv", 'w'},
	};
	int punctuation_threshold = 3;
	std::vector<std::string> urgency_keywords{
		"urgent", "immediately", "verify", "suspended", "password", "account number", "act now",
	};
	std::set<std::string> shortener_domains{"bit.ly", "tinyurl.com", "goo.gl", "t.co", "ow.ly"};

	/* Empty string when valid, otherwise the first violated constraint. */
	[[nodiscard]] auto validate() const -> std::string;
};

auto default_brands() -> const brand_directory &;

/* Sub-rule ids carried in evidence.rule. */
namespace rule_id {
inline constexpr std::string_view ip_literal = "malicious_url.ip_literal";
inline constexpr std::string_view leading_digit = "malicious_url.leading_digit";
inline constexpr std::string_view brand_hyphen = "malicious_url.brand_hyphen";
inline constexpr std::string_view shortener = "malicious_url.shortener";
inline constexpr std::string_view homoglyph = "lookalike.homoglyph";
inline constexpr std::string_view punctuation = "subject.punctuation";
inline constexpr std::string_view keyword = "subject.keyword";
inline constexpr std::string_view display_spoof = "display_name.spoof";
inline constexpr std::string_view reply_to_mismatch = "reply_to.mismatch";
inline constexpr std::string_view html_fragment = "html_body.fragment";
}// namespace rule_id

struct substitution {
	std::size_t position;// inside the label
	std::size_t length;
	std::string substitute;
	char canonical;
};

struct canonical_label {
	std::string text;
	std::vector<substitution> substitutions;
};

/* Apply the homoglyph map left to right, longest substitute first. */
auto canonicalize(std::string_view label, const rule_config &cfg) -> canonical_label;

auto rule_malicious_url(const url &u, const brand_directory &brands, const rule_config &cfg,
						const std::string &field = "host") -> std::vector<evidence>;
auto rule_lookalike(const url &u, const brand_directory &brands, const rule_config &cfg,
					const std::string &field = "host") -> std::vector<evidence>;
auto rule_suspicious_subject(const email_message &msg, const rule_config &cfg) -> std::vector<evidence>;
auto rule_display_spoof(const email_message &msg, const brand_directory &brands) -> std::vector<evidence>;
auto rule_replyto_spoof(const email_message &msg) -> std::vector<evidence>;
auto rule_html_body(const email_message &msg) -> std::vector<evidence>;

/* Shifu's explanation for one finding. */
auto advice_for(const evidence &e) -> std::string;

/* Message used when the player asks for help on a worm with no findings. */
auto no_issues_advice() -> std::string;

auto detect(const worm_content &content, const brand_directory &brands, const rule_config &cfg)
	-> detection_report;

}// namespace phinder

#endif
