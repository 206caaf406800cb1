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

#include "phinder/detector.hpp"
#include "phinder/parser.hpp"
#include "text.hpp"

#include <algorithm>

namespace phinder {

namespace {

auto make_evidence(phishing_concept c, std::string_view rule, std::string field, std::size_t start,
				   std::size_t end, std::string detail, std::map<std::string, std::string> params = {})
	-> evidence
{
	return evidence{c, std::string{rule}, evidence_span{std::move(field), start, end}, std::move(detail),
					std::move(params)};
}

/* The label the leading-digit rule inspects: the first host label, skipping a leading "www". */
auto leading_label(std::string_view host) -> std::pair<std::size_t, std::size_t>
{
	auto labels = text::split(host, '.');
	std::size_t offset = 0;
	std::size_t index = 0;
	if (labels.size() > 2 && labels.front() == "www") {
		offset = labels.front().size() + 1;
		index = 1;
	}
	return {offset, offset + labels[index].size()};
}

}// namespace

auto brand_directory::create(std::vector<brand_entry> entries) -> result<brand_directory, std::string>
{
	std::set<std::string> seen;
	for (auto &e : entries) {
		e.brand = text::to_lower(e.brand);
		if (e.brand.empty()) {
			return unexpected{std::string{"brand token must not be empty"}};
		}
		if (!seen.insert(e.brand).second) {
			return unexpected{"duplicate brand '" + e.brand + "'"};
		}
		for (const auto &d : e.legitimate_domains) {
			if (d.find(e.brand) == std::string::npos && !e.whitelisted_domains.contains(d)) {
				return unexpected{"domain '" + d + "' of brand '" + e.brand +
								  "' neither contains the brand nor is whitelisted"};
			}
		}
	}
	brand_directory dir;
	dir.entries_ = std::move(entries);
	return dir;
}

auto brand_directory::find(std::string_view brand) const -> const brand_entry *
{
	auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto &e) { return e.brand == brand; });
	return it == entries_.end() ? nullptr : &*it;
}

auto brand_directory::find_by_display_name(std::string_view name) const -> const brand_entry *
{
	auto wanted = text::trim(name);
	for (const auto &e : entries_) {
		for (const auto &d : e.expected_display_names) {
			if (text::iequals(d, wanted)) {
				return &e;
			}
		}
	}
	return nullptr;
}

auto brand_directory::find_by_domain(std::string_view registrable) const -> const brand_entry *
{
	for (const auto &e : entries_) {
		if (e.legitimate_domains.contains(std::string{registrable})) {
			return &e;
		}
	}
	return nullptr;
}

auto default_brands() -> const brand_directory &
{
	static const brand_directory dir = [] {
		std::vector<brand_entry> entries{
			{"google", {"google.com", "googlemail.com", "gmail.com", "youtube.com"}, {"Google", "Gmail", "Google Accounts"},
			 {"googlemail.com", "gmail.com", "youtube.com"}},
			{"paypal", {"paypal.com", "paypal.com.au"}, {"PayPal", "PayPal Service"}, {}},
			{"amazon", {"amazon.com", "amazon.com.au", "amazon.co.uk"}, {"Amazon", "Amazon.com"}, {}},
			{"apple", {"apple.com", "icloud.com"}, {"Apple", "Apple Support", "iCloud"}, {"icloud.com"}},
			{"microsoft", {"microsoft.com", "microsoftonline.com", "outlook.com", "live.com", "office.com"},
			 {"Microsoft", "Microsoft account team", "Outlook"}, {"outlook.com", "live.com", "office.com"}},
			{"netflix", {"netflix.com"}, {"Netflix"}, {}},
			{"dropbox", {"dropbox.com", "dropboxmail.com"}, {"Dropbox"}, {}},
			{"facebook", {"facebook.com", "facebookmail.com"}, {"Facebook"}, {}},
			{"linkedin", {"linkedin.com"}, {"LinkedIn"}, {}},
			{"ebay", {"ebay.com", "ebay.com.au"}, {"eBay"}, {}},
			{"commbank", {"commbank.com.au"}, {"CommBank", "Commonwealth Bank"}, {}},
			{"github", {"github.com"}, {"GitHub"}, {}},
		};
		return brand_directory::create(std::move(entries)).value();
	}();
	return dir;
}

auto rule_config::validate() const -> std::string
{
	if (punctuation_threshold < 1) {
		return "punctuation_threshold must be at least 1";
	}
	for (const auto &h : homoglyph_map) {
		if (h.substitute.empty()) {
			return "homoglyph substitute must not be empty";
		}
		if (!text::is_alpha(h.canonical)) {
			return "homoglyph canonical value must be an ASCII letter";
		}
	}
	for (const auto &k : urgency_keywords) {
		if (k.empty() || k != text::to_lower(k)) {
			return "urgency keywords must be non-empty lowercase";
		}
	}
	return {};
}

auto canonicalize(std::string_view label, const rule_config &cfg) -> canonical_label
{
	auto map = cfg.homoglyph_map;
	std::stable_sort(map.begin(), map.end(), [](const auto &a, const auto &b) {
		return a.substitute.size() > b.substitute.size();
	});
	canonical_label out;
	std::size_t i = 0;
	while (i < label.size()) {
		const homoglyph *hit = nullptr;
		for (const auto &h : map) {
			if (label.substr(i, h.substitute.size()) == h.substitute) {
				hit = &h;
				break;
			}
		}
		if (hit != nullptr) {
			out.substitutions.push_back({i, hit->substitute.size(), hit->substitute, hit->canonical});
			out.text += hit->canonical;
			i += hit->substitute.size();
		}
		else {
			out.text += label[i];
			++i;
		}
	}
	return out;
}

auto rule_lookalike(const url &u, const brand_directory &brands, const rule_config &cfg, const std::string &field)
	-> std::vector<evidence>
{
	std::vector<evidence> out;
	if (u.kind != host_kind::dns_name) {
		return out;
	}
	auto lbl = registrable_label(u.host);
	auto canon = canonicalize(lbl.label, cfg);
	if (canon.text == lbl.label || brands.find(canon.text) == nullptr) {
		return out;
	}
	for (const auto &sub : canon.substitutions) {
		auto start = lbl.offset + sub.position;
		auto detail = std::string{rule_id::homoglyph} + ": '" + sub.substitute + "' substituted for '" +
					  sub.canonical + "' at position " + std::to_string(sub.position + 1) + " of \"" +
					  lbl.label + "\" (canonical \"" + canon.text + "\")";
		out.push_back(make_evidence(phishing_concept::lookalike_domain, rule_id::homoglyph, field, start,
									start + sub.length, std::move(detail),
									{{"substitute", sub.substitute},
									 {"original", std::string(1, sub.canonical)},
									 {"brand", canon.text},
									 {"label", lbl.label}}));
	}
	return out;
}

auto rule_malicious_url(const url &u, const brand_directory &brands, const rule_config &cfg,
						const std::string &field) -> std::vector<evidence>
{
	std::vector<evidence> out;
	const auto &host = u.host;

	if (u.kind == host_kind::ipv4_literal) {
		out.push_back(make_evidence(phishing_concept::malicious_url, rule_id::ip_literal, field, 0, host.size(),
									std::string{rule_id::ip_literal} + ": host " + host + " is an IP address",
									{{"host", host}}));
		return out;
	}

	auto [label_start, label_end] = leading_label(host);
	if (label_start < label_end && text::is_digit(host[label_start])) {
		auto lookalikes = rule_lookalike(u, brands, cfg, field);
		bool covered = std::any_of(lookalikes.begin(), lookalikes.end(), [&](const evidence &e) {
			return e.span.start >= label_start && e.span.end <= label_end;
		});
		if (!covered) {
			auto end = label_start;
			while (end < label_end && text::is_digit(host[end])) {
				++end;
			}
			out.push_back(make_evidence(phishing_concept::malicious_url, rule_id::leading_digit, field, label_start,
										end,
										std::string{rule_id::leading_digit} + ": label \"" +
											host.substr(label_start, label_end - label_start) +
											"\" starts with a number",
										{{"host", host}}));
		}
	}

	auto lbl = registrable_label(host);
	for (const auto &b : brands.entries()) {
		auto pos = lbl.label.find(b.brand + "-");
		if (pos != std::string::npos) {
			auto start = lbl.offset + pos;
			out.push_back(make_evidence(phishing_concept::malicious_url, rule_id::brand_hyphen, field, start,
										start + b.brand.size() + 1,
										std::string{rule_id::brand_hyphen} + ": brand \"" + b.brand +
											"\" followed by a hyphen in \"" + lbl.label + "\"",
										{{"brand", b.brand}, {"host", host}}));
			break;
		}
	}

	auto domain = registrable_domain(host);
	if (cfg.shortener_domains.contains(domain)) {
		out.push_back(make_evidence(phishing_concept::malicious_url, rule_id::shortener, field, lbl.offset,
									host.size(),
									std::string{rule_id::shortener} + ": " + domain + " is a link shortener",
									{{"domain", domain}}));
	}
	return out;
}

auto rule_suspicious_subject(const email_message &msg, const rule_config &cfg) -> std::vector<evidence>
{
	std::vector<evidence> out;
	const auto &subject = msg.subject;

	int marks = 0;
	std::size_t first = std::string::npos;
	std::size_t last = 0;
	for (std::size_t i = 0; i < subject.size(); ++i) {
		if (subject[i] == '!' || subject[i] == '?') {
			++marks;
			first = std::min(first, i);
			last = i;
		}
	}
	if (marks >= cfg.punctuation_threshold) {
		out.push_back(make_evidence(phishing_concept::suspicious_subject, rule_id::punctuation, "subject", first,
									last + 1,
									std::string{rule_id::punctuation} + ": " + std::to_string(marks) +
										" exclamation/question marks",
									{{"count", std::to_string(marks)}}));
	}

	for (const auto &kw : cfg.urgency_keywords) {
		auto pos = text::ifind(subject, kw);
		if (pos != std::string::npos) {
			out.push_back(make_evidence(phishing_concept::suspicious_subject, rule_id::keyword, "subject", pos,
										pos + kw.size(),
										std::string{rule_id::keyword} + ": subject mentions \"" + kw + "\"",
										{{"keyword", kw}}));
		}
	}
	return out;
}

auto rule_display_spoof(const email_message &msg, const brand_directory &brands) -> std::vector<evidence>
{
	std::vector<evidence> out;
	if (!msg.display_name) {
		return out;
	}
	const auto *brand = brands.find_by_display_name(*msg.display_name);
	if (brand == nullptr) {
		return out;
	}
	auto domain = registrable_domain(msg.from.domain);
	if (brand->legitimate_domains.contains(domain)) {
		return out;
	}
	auto start = msg.from.local.size() + 1;
	out.push_back(make_evidence(phishing_concept::display_name_spoof, rule_id::display_spoof, "from", start,
								start + msg.from.domain.size(),
								std::string{rule_id::display_spoof} + ": \"" + std::string{text::trim(*msg.display_name)} +
									"\" sent from " + domain + ", not a " + brand->brand + " domain",
								{{"display", std::string{text::trim(*msg.display_name)}},
								 {"domain", domain},
								 {"brand", brand->brand}}));
	return out;
}

auto rule_replyto_spoof(const email_message &msg) -> std::vector<evidence>
{
	std::vector<evidence> out;
	if (!msg.reply_to) {
		return out;
	}
	auto from_domain = registrable_domain(msg.from.domain);
	auto reply_domain = registrable_domain(msg.reply_to->domain);
	if (from_domain == reply_domain) {
		return out;
	}
	out.push_back(make_evidence(phishing_concept::reply_to_spoof, rule_id::reply_to_mismatch, "reply_to", 0,
								msg.reply_to->str().size(),
								std::string{rule_id::reply_to_mismatch} + ": replies go to " + reply_domain +
									" but the sender is at " + from_domain,
								{{"reply_domain", reply_domain}, {"from_domain", from_domain}}));
	return out;
}

auto rule_html_body(const email_message &msg) -> std::vector<evidence>
{
	std::vector<evidence> out;
	for (std::size_t i = 0; i < msg.body.size(); ++i) {
		const auto &seg = msg.body[i];
		if (seg.kind != segment_kind::html_fragment) {
			continue;
		}
		auto name_end = seg.text.find_first_of(" \t\r\n/>", 1);
		auto tag = seg.text.substr(1, name_end - 1);
		out.push_back(make_evidence(phishing_concept::html_body, rule_id::html_fragment,
									"body[" + std::to_string(i) + "]", 0, seg.text.size(),
									std::string{rule_id::html_fragment} + ": <" + tag + "> markup in the body",
									{{"tag", text::to_lower(tag)}}));
	}
	return out;
}

auto advice_for(const evidence &e) -> std::string
{
	auto param = [&](const char *key) -> std::string {
		auto it = e.params.find(key);
		return it == e.params.end() ? std::string{} : it->second;
	};

	if (e.rule == rule_id::ip_literal) {
		return "a website address made only of numbers, like " + param("host") +
			   ", hides who really runs the site";
	}
	if (e.rule == rule_id::leading_digit) {
		return "website addresses associated with numbers in the front are generally scams";
	}
	if (e.rule == rule_id::brand_hyphen) {
		return "a company name followed by a hyphen in a URL is generally a scam";
	}
	if (e.rule == rule_id::shortener) {
		return param("domain") + " is a link shortener, so you cannot see where the link really takes you";
	}
	if (e.rule == rule_id::homoglyph) {
		return "the '" + param("original") + "' in \"" + param("brand") + "\" has been changed to a '" +
			   param("substitute") + "'";
	}
	if (e.rule == rule_id::punctuation) {
		return "lots of exclamation or question marks in a subject line are there to rush you";
	}
	if (e.rule == rule_id::keyword) {
		auto kw = param("keyword");
		if (kw == "account number") {
			return "your bank will not send an email to ask you about your account number";
		}
		if (kw == "password") {
			return "a real company will not send an email to ask you about your password";
		}
		return "a subject saying \"" + kw + "\" is trying to make you act before you think";
	}
	if (e.rule == rule_id::display_spoof) {
		return "the sender's name says \"" + param("display") + "\" but the address is at " + param("domain") +
			   ", which does not belong to them";
	}
	if (e.rule == rule_id::reply_to_mismatch) {
		return "if you press reply, your answer goes to " + param("reply_domain") + " instead of " +
			   param("from_domain");
	}
	if (e.rule == rule_id::html_fragment) {
		return "this email has HTML in its body, which can hide where its links really go";
	}

	switch (e.concept_id) {
	case phishing_concept::malicious_url:
		return "something about this web address does not look right";
	case phishing_concept::lookalike_domain:
		return "this address imitates a well-known name with lookalike characters";
	case phishing_concept::suspicious_subject:
		return "this subject line is trying to rush you";
	case phishing_concept::display_name_spoof:
		return "the sender's name and address do not match";
	case phishing_concept::reply_to_spoof:
		return "replies to this email go somewhere else";
	case phishing_concept::html_body:
		return "this email has HTML in its body";
	}
	return "be careful with this one";
}

auto no_issues_advice() -> std::string
{
	return "I looked closely and could not find any tricks in this one";
}

auto detect(const worm_content &content, const brand_directory &brands, const rule_config &cfg)
	-> detection_report
{
	std::vector<evidence> findings;
	auto append = [&](std::vector<evidence> more) {
		findings.insert(findings.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
	};

	if (const auto *u = std::get_if<url>(&content)) {
		append(rule_malicious_url(*u, brands, cfg));
		append(rule_lookalike(*u, brands, cfg));
	}
	else {
		const auto &msg = std::get<email_message>(content);
		for (std::size_t i = 0; i < msg.body.size(); ++i) {
			for (std::size_t j = 0; j < msg.body[i].urls.size(); ++j) {
				auto field = "body[" + std::to_string(i) + "].urls[" + std::to_string(j) + "].host";
				const auto &link = msg.body[i].urls[j].link;
				append(rule_malicious_url(link, brands, cfg, field));
				append(rule_lookalike(link, brands, cfg, field));
			}
		}
		append(rule_suspicious_subject(msg, cfg));
		append(rule_display_spoof(msg, brands));
		append(rule_replyto_spoof(msg));
		append(rule_html_body(msg));
	}

	std::stable_sort(findings.begin(), findings.end(), [](const evidence &a, const evidence &b) {
		if (a.concept_id != b.concept_id) {
			return catalog_index(a.concept_id) < catalog_index(b.concept_id);
		}
		return a.span.start < b.span.start;
	});

	detection_report report;
	report.verdict = findings.empty() ? label::legitimate : label::phishing;
	for (const auto &f : findings) {
		report.advice.push_back(advice_for(f));
	}
	report.findings = std::move(findings);
	return report;
}

}// namespace phinder
