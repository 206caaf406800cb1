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

#include "phinder/model.hpp"

#include <stdexcept>

namespace phinder {

auto concept_catalog() -> const std::vector<concept_description> &
{
	static const std::vector<concept_description> catalog{
		{phishing_concept::malicious_url,
		 "Malicious URLs: addresses built on raw IP numbers, leading digits, brand-hyphen names or link shorteners."},
		{phishing_concept::lookalike_domain,
		 "Lookalike domain: a brand name with characters swapped for similar ones, such as an 'o' replaced by a '0'."},
		{phishing_concept::suspicious_subject,
		 "Subject line of emails: piles of punctuation or urgent requests for private details like passwords."},
		{phishing_concept::display_name_spoof,
		 "Display name spoofing: a familiar sender name shown in front of an address that does not belong to it."},
		{phishing_concept::reply_to_spoof,
		 "Reply-to spoofing: replies are quietly routed to a different address than the sender's."},
		{phishing_concept::html_body,
		 "HTML in body of email: markup in the message body that can disguise where links really go."},
	};
	return catalog;
}

auto to_string(phishing_concept c) -> std::string_view
{
	switch (c) {
	case phishing_concept::malicious_url:
		return "malicious_url";
	case phishing_concept::lookalike_domain:
		return "lookalike_domain";
	case phishing_concept::suspicious_subject:
		return "suspicious_subject";
	case phishing_concept::display_name_spoof:
		return "display_name_spoof";
	case phishing_concept::reply_to_spoof:
		return "reply_to_spoof";
	case phishing_concept::html_body:
		return "html_body";
	}
	return "unknown";
}

auto concept_from_string(std::string_view s) -> std::optional<phishing_concept>
{
	for (auto c : all_concepts) {
		if (to_string(c) == s) {
			return c;
		}
	}
	return std::nullopt;
}

auto to_string(label l) -> std::string_view
{
	return l == label::phishing ? "phishing" : "legitimate";
}

worm::worm(std::string id, worm_content content, label ground_truth, concept_set intended,
		   bool bonus, provenance origin)
	: id_(std::move(id)),
	  content_(std::move(content)),
	  ground_truth_(ground_truth),
	  intended_(std::move(intended)),
	  bonus_(bonus),
	  origin_(std::move(origin))
{
	if (ground_truth_ == label::phishing && intended_.empty()) {
		throw std::invalid_argument("phishing worm needs at least one intended concept");
	}
	if (ground_truth_ == label::legitimate && !intended_.empty()) {
		throw std::invalid_argument("legitimate worm cannot carry intended concepts");
	}
}

auto worm::display_text() const -> std::string
{
	return content_text(content_);
}

auto content_text(const worm_content &content) -> std::string
{
	if (const auto *u = std::get_if<url>(&content)) {
		return u->raw;
	}
	return std::get<email_message>(content).serialize();
}

auto detection_report::concepts() const -> concept_set
{
	concept_set out;
	for (const auto &f : findings) {
		out.insert(f.concept_id);
	}
	return out;
}

namespace {

/* Parses "body[3]" style indices; returns the index and advances the view past ']'. */
auto take_index(std::string_view &s, std::string_view prefix) -> std::optional<std::size_t>
{
	if (s.substr(0, prefix.size()) != prefix) {
		return std::nullopt;
	}
	s.remove_prefix(prefix.size());
	std::size_t value = 0;
	std::size_t digits = 0;
	while (digits < s.size() && s[digits] >= '0' && s[digits] <= '9') {
		value = value * 10 + static_cast<std::size_t>(s[digits] - '0');
		++digits;
	}
	if (digits == 0 || digits >= s.size() || s[digits] != ']') {
		return std::nullopt;
	}
	s.remove_prefix(digits + 1);
	return value;
}

}// namespace

auto field_text(const worm_content &content, std::string_view field) -> std::optional<std::string>
{
	if (const auto *u = std::get_if<url>(&content)) {
		if (field == "host") {
			return u->host;
		}
		return std::nullopt;
	}
	const auto &msg = std::get<email_message>(content);
	if (field == "subject") {
		return msg.subject;
	}
	if (field == "from") {
		return msg.from.str();
	}
	if (field == "reply_to") {
		return msg.reply_to ? std::optional{msg.reply_to->str()} : std::nullopt;
	}
	if (field == "display_name") {
		return msg.display_name;
	}
	auto rest = field;
	auto seg = take_index(rest, "body[");
	if (!seg || *seg >= msg.body.size()) {
		return std::nullopt;
	}
	if (rest.empty()) {
		return msg.body[*seg].text;
	}
	auto link = take_index(rest, ".urls[");
	if (!link || *link >= msg.body[*seg].urls.size() || rest != ".host") {
		return std::nullopt;
	}
	return msg.body[*seg].urls[*link].link.host;
}

}// namespace phinder
