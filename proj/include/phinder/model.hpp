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

/* Shared domain types: the concept taxonomy, parsed URLs and emails, worms and detection reports. */

#ifndef PHINDER_MODEL_HPP
#define PHINDER_MODEL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace phinder {

enum class phishing_concept : std::uint8_t {
	malicious_url,
	lookalike_domain,
	suspicious_subject,
	display_name_spoof,
	reply_to_spoof,
	html_body,
};

inline constexpr std::size_t concept_count = 6;

inline constexpr std::array<phishing_concept, concept_count> all_concepts{
	phishing_concept::malicious_url,
	phishing_concept::lookalike_domain,
	phishing_concept::suspicious_subject,
	phishing_concept::display_name_spoof,
	phishing_concept::reply_to_spoof,
	phishing_concept::html_body,
};

struct concept_description {
	phishing_concept id;
	std::string_view description;
};

/* All six concepts in teaching order with a one-sentence description each. */
auto concept_catalog() -> const std::vector<concept_description> &;

/* Stable snake_case identifier used on the wire and in files. */
auto to_string(phishing_concept c) -> std::string_view;
auto concept_from_string(std::string_view s) -> std::optional<phishing_concept>;

/* Position in catalog order; findings and mutations are ordered by it. */
constexpr auto catalog_index(phishing_concept c) -> std::size_t
{
	return static_cast<std::size_t>(c);
}

/* Set of concepts; iteration follows catalog order. */
using concept_set = std::set<phishing_concept>;

enum class host_kind : std::uint8_t {
	dns_name,
	ipv4_literal,
};

struct url {
	std::string raw;
	std::string scheme;
	std::string host;
	host_kind kind = host_kind::dns_name;
	std::optional<std::uint16_t> port;
	std::string path = "/";
	std::optional<std::string> query;
	/* Offset of the host inside raw; lets mutations rewrite raw in place. */
	std::size_t host_offset = 0;

	/* Normalized textual form, always with an explicit scheme. */
	[[nodiscard]] auto serialize() const -> std::string;

	/* Equality on the normalized form; raw and host_offset are not compared. */
	friend auto operator==(const url &a, const url &b) -> bool
	{
		return a.scheme == b.scheme && a.host == b.host && a.kind == b.kind &&
			   a.port == b.port && a.path == b.path && a.query == b.query;
	}
};

struct email_address {
	std::string local;
	std::string domain;

	[[nodiscard]] auto str() const -> std::string
	{
		return local + "@" + domain;
	}
	friend auto operator==(const email_address &, const email_address &) -> bool = default;
};

enum class segment_kind : std::uint8_t {
	plain_text,
	html_fragment,
};

struct embedded_url {
	url link;
	/* Byte offset of link.raw inside the owning segment's text. */
	std::size_t offset = 0;
};

/*
 * Plain text segments carry the links written as <scheme://...> or bare
 * http(s):// tokens; HTML fragments carry their href targets.
 */
struct body_segment {
	segment_kind kind = segment_kind::plain_text;
	std::string text;
	std::vector<embedded_url> urls;
};

struct source_span {
	std::size_t start = 0;
	std::size_t end = 0;
	friend auto operator==(const source_span &, const source_span &) -> bool = default;
};

struct email_message {
	std::optional<std::string> display_name;
	email_address from;
	std::optional<email_address> reply_to;
	email_address to;
	std::string subject;
	std::vector<body_segment> body;

	/* Text the message was parsed from, and where each field sits inside it. */
	std::string raw;
	std::map<std::string, source_span> source;

	[[nodiscard]] auto serialize() const -> std::string;
	[[nodiscard]] auto body_text() const -> std::string;
};

using worm_content = std::variant<url, email_message>;

enum class label : std::uint8_t {
	legitimate,
	phishing,
};

auto to_string(label l) -> std::string_view;

struct provenance {
	std::string corpus_item_id;
	std::uint64_t mutation_seed = 0;
};

class worm {
public:
	/* Throws std::invalid_argument when the label and concept set disagree. */
	worm(std::string id, worm_content content, label ground_truth, concept_set intended,
		 bool bonus, provenance origin);

	[[nodiscard]] auto id() const -> const std::string & { return id_; }
	[[nodiscard]] auto content() const -> const worm_content & { return content_; }
	[[nodiscard]] auto ground_truth() const -> label { return ground_truth_; }
	[[nodiscard]] auto intended_concepts() const -> const concept_set & { return intended_; }
	[[nodiscard]] auto bonus() const -> bool { return bonus_; }
	[[nodiscard]] auto origin() const -> const provenance & { return origin_; }

	[[nodiscard]] auto is_email() const -> bool
	{
		return std::holds_alternative<email_message>(content_);
	}
	/* URL raw text or the serialized email, exactly as the player sees it. */
	[[nodiscard]] auto display_text() const -> std::string;

private:
	std::string id_;
	worm_content content_;
	label ground_truth_;
	concept_set intended_;
	bool bonus_;
	provenance origin_;
};

struct evidence_span {
	std::string field;
	std::size_t start = 0;
	std::size_t end = 0;
};

struct evidence {
	phishing_concept concept_id;
	/* Machine-readable sub-rule id, e.g. "lookalike.homoglyph". */
	std::string rule;
	evidence_span span;
	std::string detail;
	/* Values the advice template is filled with (keyword, substituted pair, brand...). */
	std::map<std::string, std::string> params;
};

struct detection_report {
	label verdict = label::legitimate;
	std::vector<evidence> findings;
	std::vector<std::string> advice;

	[[nodiscard]] auto concepts() const -> concept_set;
};

/*
 * Resolve an evidence field name ("host", "subject", "from", "reply_to",
 * "display_name", "body[i]", "body[i].urls[j].host") to the text it names.
 */
auto field_text(const worm_content &content, std::string_view field) -> std::optional<std::string>;

/* Serialized form of a worm's content: URL raw text or the email text. */
auto content_text(const worm_content &content) -> std::string;

}// namespace phinder

#endif
