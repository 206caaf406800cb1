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

#include "phinder/generator.hpp"
#include "phinder/parser.hpp"
#include "text.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace phinder {

namespace {

/* Fictional attacker domains on reserved TLDs; never real registrable names. */
constexpr std::array attacker_domains{
	std::string_view{"secure-login.example"}, std::string_view{"account-alerts.test"},
	std::string_view{"mail-service.invalid"}, std::string_view{"notify-center.example"},
	std::string_view{"support-desk.test"}, std::string_view{"billing-notice.invalid"},
};

constexpr std::array hyphen_words{
	std::string_view{"secure"}, std::string_view{"login"}, std::string_view{"support"},
	std::string_view{"update"}, std::string_view{"service"}, std::string_view{"billing"},
};

constexpr std::array ip_prefixes{
	std::string_view{"192.0.2."}, std::string_view{"198.51.100."}, std::string_view{"203.0.113."},
};

constexpr std::string_view base62 = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

auto fail(mutation_error_kind kind, std::string msg) -> unexpected<mutation_error>
{
	return unexpected{mutation_error{kind, std::move(msg)}};
}

auto is_url_concept(phishing_concept c) -> bool
{
	return c == phishing_concept::malicious_url || c == phishing_concept::lookalike_domain;
}

auto engine_for(rng_state s) -> std::mt19937_64
{
	std::seed_seq seq{
		static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
		static_cast<std::uint32_t>(s.draws), static_cast<std::uint32_t>(s.draws >> 32),
	};
	return std::mt19937_64{seq};
}

/* Uniform in [0, n) by rejection; std distributions are not portable across standard libraries. */
auto uniform(std::mt19937_64 &rng, std::uint64_t n) -> std::uint64_t
{
	auto limit = std::mt19937_64::max() - (std::mt19937_64::max() % n);
	while (true) {
		auto x = rng();
		if (x < limit) {
			return x % n;
		}
	}
}

auto chance(std::mt19937_64 &rng, ratio p) -> bool
{
	return uniform(rng, p.den) < p.num;
}

auto with_host(const url &u, const std::string &new_host) -> url
{
	auto raw = u.raw.substr(0, u.host_offset) + new_host + u.raw.substr(u.host_offset + u.host.size());
	return parse_url(raw).value();
}

auto lookalike_url(const url &u, const brand_directory &brands, const rule_config &cfg, std::uint64_t seed)
	-> result<url, mutation_error>
{
	if (u.kind != host_kind::dns_name) {
		return fail(mutation_error_kind::no_mutable_position, "host is an IP address");
	}
	auto lbl = registrable_label(u.host);
	if (brands.find(lbl.label) == nullptr) {
		return fail(mutation_error_kind::no_mutable_position, "\"" + lbl.label + "\" is not a brand label");
	}
	std::vector<std::pair<std::size_t, std::string>> candidates;
	for (std::size_t p = 0; p < lbl.label.size(); ++p) {
		auto it = std::find_if(cfg.homoglyph_map.begin(), cfg.homoglyph_map.end(),
							   [&](const homoglyph &h) { return h.canonical == lbl.label[p]; });
		if (it != cfg.homoglyph_map.end()) {
			candidates.emplace_back(p, it->substitute);
		}
	}
	if (candidates.empty()) {
		return fail(mutation_error_kind::no_mutable_position, "\"" + lbl.label + "\" has no mappable character");
	}
	const auto &[pos, substitute] = candidates[seed % candidates.size()];
	auto label = lbl.label;
	label.replace(pos, 1, substitute);
	auto host = u.host.substr(0, lbl.offset) + label + u.host.substr(lbl.offset + lbl.label.size());
	return with_host(u, host);
}

auto malicious_url(const url &u, const brand_directory &brands, const rule_config &cfg, std::uint64_t seed) -> url
{
	auto op = seed % 3;
	auto sub = seed / 3;
	if (op == 0 || brands.entries().empty()) {
		auto host = std::string{ip_prefixes[sub % ip_prefixes.size()]} + std::to_string(1 + (sub / 3) % 254);
		return with_host(u, host);
	}
	if (op == 1 && u.kind == host_kind::dns_name) {
		auto lbl = registrable_label(u.host);
		std::string brand;
		for (const auto &b : brands.entries()) {
			if (lbl.label.find(b.brand) != std::string::npos) {
				brand = b.brand;
				break;
			}
		}
		std::string label;
		if (brand.empty()) {
			brand = brands.entries()[sub % brands.entries().size()].brand;
			label = brand + "-" + lbl.label;
		}
		else {
			label = brand + "-" + std::string{hyphen_words[sub % hyphen_words.size()]};
		}
		auto host = u.host.substr(0, lbl.offset) + label + u.host.substr(lbl.offset + lbl.label.size());
		return with_host(u, host);
	}
	std::vector<std::string> shorteners(cfg.shortener_domains.begin(), cfg.shortener_domains.end());
	if (shorteners.empty()) {
		auto host = std::string{ip_prefixes[sub % ip_prefixes.size()]} + std::to_string(1 + (sub / 3) % 254);
		return with_host(u, host);
	}
	auto code = sub / shorteners.size();
	std::string path = "/";
	for (int i = 0; i < 7; ++i) {
		path += base62[code % base62.size()];
		code /= base62.size();
	}
	return parse_url("https://" + shorteners[sub % shorteners.size()] + path).value();
}

auto normalized(const email_message &m) -> email_message
{
	return parse_email(m.serialize()).value();
}

struct link_ref {
	std::size_t segment;
	std::size_t index;
};

auto links_of(const email_message &m) -> std::vector<link_ref>
{
	std::vector<link_ref> out;
	for (std::size_t i = 0; i < m.body.size(); ++i) {
		for (std::size_t j = 0; j < m.body[i].urls.size(); ++j) {
			out.push_back({i, j});
		}
	}
	return out;
}

auto reparse(const std::string &text) -> result<email_message, mutation_error>
{
	auto parsed = parse_email(text);
	if (!parsed) {
		return fail(mutation_error_kind::no_mutable_position, "mutated message no longer parses: " + parsed.error().message);
	}
	return std::move(parsed).value();
}

/* Replace the raw text of one embedded link; m must be normalized. */
auto replace_link(const email_message &m, link_ref ref, const std::string &replacement) -> result<email_message, mutation_error>
{
	const auto &link = m.body[ref.segment].urls[ref.index];
	auto pos = m.source.at("body[" + std::to_string(ref.segment) + "]").start + link.offset;
	auto raw = m.raw;
	raw.replace(pos, link.link.raw.size(), replacement);
	return reparse(raw);
}

auto append_line(const email_message &m, const std::string &line) -> result<email_message, mutation_error>
{
	auto raw = m.raw;
	if (!raw.empty() && raw.back() != '\n') {
		raw += '\n';
	}
	raw += line + "\n";
	return reparse(raw);
}

auto sender_link(const email_message &m) -> std::string
{
	return "https://www." + registrable_domain(m.from.domain) + "/";
}

auto url_concept_on_email(phishing_concept c, const email_message &msg, const brand_directory &brands,
						  const rule_config &cfg, std::uint64_t seed) -> result<worm_content, mutation_error>
{
	auto m = normalized(msg);
	auto refs = links_of(m);

	if (c == phishing_concept::malicious_url) {
		if (refs.empty()) {
			auto appended = append_line(m, "More details: " + sender_link(m));
			if (!appended) {
				return unexpected{appended.error()};
			}
			m = std::move(appended).value();
			refs = links_of(m);
		}
		auto ref = refs.front();
		auto mutated = malicious_url(m.body[ref.segment].urls[ref.index].link, brands, cfg, seed);
		auto out = replace_link(m, ref, mutated.raw);
		if (!out) {
			return unexpected{out.error()};
		}
		return worm_content{std::move(out).value()};
	}

	for (auto ref : refs) {
		const auto &link = m.body[ref.segment].urls[ref.index].link;
		if (auto mutated = lookalike_url(link, brands, cfg, seed)) {
			auto out = replace_link(m, ref, mutated->raw);
			if (!out) {
				return unexpected{out.error()};
			}
			return worm_content{std::move(out).value()};
		}
	}
	if (brands.find_by_domain(registrable_domain(m.from.domain)) == nullptr) {
		return fail(mutation_error_kind::no_mutable_position, "no brand link to imitate");
	}
	auto appended = append_line(m, "More details: " + sender_link(m));
	if (!appended) {
		return unexpected{appended.error()};
	}
	m = std::move(appended).value();
	refs = links_of(m);
	auto ref = refs.back();
	auto mutated = lookalike_url(m.body[ref.segment].urls[ref.index].link, brands, cfg, seed);
	if (!mutated) {
		return unexpected{mutated.error()};
	}
	auto out = replace_link(m, ref, mutated->raw);
	if (!out) {
		return unexpected{out.error()};
	}
	return worm_content{std::move(out).value()};
}

auto capitalized(std::string s) -> std::string
{
	if (!s.empty() && s.front() >= 'a' && s.front() <= 'z') {
		s.front() = static_cast<char>(s.front() - 'a' + 'A');
	}
	return s;
}

auto suspicious_subject(email_message m, const rule_config &cfg, std::uint64_t seed) -> result<worm_content, mutation_error>
{
	if (cfg.urgency_keywords.empty()) {
		return fail(mutation_error_kind::no_mutable_position, "no urgency keywords configured");
	}
	const auto &kw = cfg.urgency_keywords[seed % cfg.urgency_keywords.size()];
	auto marks = std::count_if(m.subject.begin(), m.subject.end(), [](char ch) { return ch == '!' || ch == '?'; });
	auto pad = std::max<std::ptrdiff_t>(0, cfg.punctuation_threshold - marks);
	m.subject = capitalized(kw) + ": " + m.subject + std::string(static_cast<std::size_t>(pad), '!');
	auto out = reparse(m.serialize());
	if (!out) {
		return unexpected{out.error()};
	}
	return worm_content{std::move(out).value()};
}

auto pick_attacker(std::uint64_t seed, std::string_view avoid) -> std::string
{
	for (std::size_t i = 0; i < attacker_domains.size(); ++i) {
		auto d = attacker_domains[(seed + i) % attacker_domains.size()];
		if (d != avoid) {
			return std::string{d};
		}
	}
	return std::string{attacker_domains.front()};
}

auto display_spoof(email_message m, const brand_directory &brands, std::uint64_t seed) -> result<worm_content, mutation_error>
{
	if (brands.entries().empty()) {
		return fail(mutation_error_kind::no_mutable_position, "brand directory is empty");
	}
	const brand_entry *brand = m.display_name ? brands.find_by_display_name(*m.display_name) : nullptr;
	if (brand == nullptr) {
		brand = brands.find_by_domain(registrable_domain(m.from.domain));
		if (brand == nullptr) {
			brand = &brands.entries()[seed % brands.entries().size()];
		}
		if (brand->expected_display_names.empty()) {
			return fail(mutation_error_kind::no_mutable_position, "brand has no display name");
		}
		m.display_name = *brand->expected_display_names.begin();
	}
	auto old_domain = registrable_domain(m.from.domain);
	auto attacker = pick_attacker(seed / 7, old_domain);
	m.from.domain = attacker;
	if (m.reply_to && registrable_domain(m.reply_to->domain) == old_domain) {
		m.reply_to->domain = attacker;
	}
	auto out = reparse(m.serialize());
	if (!out) {
		return unexpected{out.error()};
	}
	return worm_content{std::move(out).value()};
}

auto reply_to_spoof(email_message m, std::uint64_t seed) -> result<worm_content, mutation_error>
{
	auto attacker = pick_attacker(seed, registrable_domain(m.from.domain));
	m.reply_to = email_address{m.from.local, attacker};
	auto out = reparse(m.serialize());
	if (!out) {
		return unexpected{out.error()};
	}
	return worm_content{std::move(out).value()};
}

auto html_body(const email_message &msg) -> result<worm_content, mutation_error>
{
	auto m = normalized(msg);
	for (std::size_t i = 0; i < m.body.size(); ++i) {
		const auto &seg = m.body[i];
		if (seg.kind != segment_kind::plain_text || seg.urls.empty()) {
			continue;
		}
		const auto &link = seg.urls.front();
		auto start = m.source.at("body[" + std::to_string(i) + "]").start + link.offset;
		auto len = link.link.raw.size();
		/* Swallow autolink brackets so "<https://...>" becomes a single anchor. */
		if (link.offset > 0 && seg.text[link.offset - 1] == '<' && link.offset + len < seg.text.size() &&
			seg.text[link.offset + len] == '>') {
			--start;
			len += 2;
		}
		auto raw = m.raw;
		raw.replace(start, len, "<a href=\"" + link.link.raw + "\">" + link.link.raw + "</a>");
		auto out = reparse(raw);
		if (!out) {
			return unexpected{out.error()};
		}
		return worm_content{std::move(out).value()};
	}
	auto out = append_line(m, "<a href=\"" + sender_link(m) + "\">Open your account</a>");
	if (!out) {
		return unexpected{out.error()};
	}
	return worm_content{std::move(out).value()};
}

auto read_file(const std::filesystem::path &p) -> std::optional<std::string>
{
	std::ifstream in(p, std::ios::binary);
	if (!in) {
		return std::nullopt;
	}
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

}// namespace

auto to_string(mutation_error_kind k) -> std::string_view
{
	return k == mutation_error_kind::inapplicable_concept ? "inapplicable_concept" : "no_mutable_position";
}

auto to_string(generate_error_kind k) -> std::string_view
{
	return k == generate_error_kind::exhausted_corpus ? "exhausted_corpus" : "invalid_level";
}

auto parse_url_list(std::string_view input, std::string_view name) -> result<std::vector<corpus_item>, std::string>
{
	std::vector<corpus_item> out;
	std::size_t line_no = 0;
	for (auto line : text::split(input, '\n')) {
		++line_no;
		auto trimmed = text::trim(line);
		if (trimmed.empty() || trimmed.front() == '#') {
			continue;
		}
		auto parsed = parse_url(trimmed);
		if (!parsed) {
			return unexpected{std::string{name} + ":" + std::to_string(line_no) + ": " + parsed.error().message};
		}
		out.push_back({std::string{name} + ":" + std::to_string(line_no), std::move(parsed).value()});
	}
	return out;
}

auto parse_email_file(std::string_view input, std::string_view name) -> result<std::vector<corpus_item>, std::string>
{
	std::vector<corpus_item> out;
	std::string current;
	std::size_t index = 0;
	auto flush = [&]() -> std::optional<std::string> {
		if (text::trim(current).empty()) {
			current.clear();
			return std::nullopt;
		}
		++index;
		auto start = current.find_first_not_of("\r\n");
		auto parsed = parse_email(std::string_view{current}.substr(start));
		if (!parsed) {
			return std::string{name} + "#" + std::to_string(index) + ": " + parsed.error().message;
		}
		out.push_back({std::string{name} + "#" + std::to_string(index), std::move(parsed).value()});
		current.clear();
		return std::nullopt;
	};
	for (auto line : text::split(input, '\n')) {
		auto bare = line;
		if (!bare.empty() && bare.back() == '\r') {
			bare.remove_suffix(1);
		}
		if (bare == "%%") {
			if (auto err = flush()) {
				return unexpected{*err};
			}
			continue;
		}
		current += std::string{line} + "\n";
	}
	if (auto err = flush()) {
		return unexpected{*err};
	}
	return out;
}

auto load_corpus(const std::filesystem::path &path) -> result<corpus, std::string>
{
	std::vector<std::filesystem::path> files;
	std::error_code ec;
	if (std::filesystem::is_directory(path, ec)) {
		for (const auto &entry : std::filesystem::directory_iterator(path, ec)) {
			files.push_back(entry.path());
		}
		std::sort(files.begin(), files.end());
	}
	else if (std::filesystem::exists(path, ec)) {
		files.push_back(path);
	}
	else {
		return unexpected{"no such corpus path: " + path.string()};
	}

	corpus c;
	for (const auto &f : files) {
		auto ext = f.extension().string();
		if (ext != ".urls" && ext != ".emails") {
			continue;
		}
		auto content = read_file(f);
		if (!content) {
			return unexpected{"cannot read " + f.string()};
		}
		auto name = f.stem().string();
		auto items = ext == ".urls" ? parse_url_list(*content, name) : parse_email_file(*content, name);
		if (!items) {
			return unexpected{items.error()};
		}
		for (auto &item : *items) {
			c.items.push_back(std::move(item));
		}
	}
	std::set<std::string> ids;
	for (const auto &item : c.items) {
		if (!ids.insert(item.id).second) {
			return unexpected{"duplicate corpus id " + item.id};
		}
	}
	if (c.items.empty()) {
		return unexpected{"corpus at " + path.string() + " has no items"};
	}
	return c;
}

auto validate_corpus(const corpus &c, const brand_directory &brands, const rule_config &cfg)
	-> std::vector<validation_entry>
{
	std::vector<validation_entry> out;
	for (const auto &item : c.items) {
		auto report = detect(item.content, brands, cfg);
		if (report.verdict != label::legitimate) {
			out.push_back({item.id, std::move(report)});
		}
	}
	return out;
}

auto level_config::validate() const -> std::string
{
	if (level < 1) {
		return "level must be at least 1";
	}
	if (allowed_concepts.empty()) {
		return "allowed_concepts must not be empty";
	}
	if (concepts_per_phish < 1 || static_cast<std::size_t>(concepts_per_phish) > allowed_concepts.size()) {
		return "concepts_per_phish must be between 1 and the number of allowed concepts";
	}
	if (worm_count < 1) {
		return "worm_count must be positive";
	}
	if (phish_fraction.den == 0 || phish_fraction.num > phish_fraction.den) {
		return "phish_fraction must lie in [0, 1]";
	}
	if (bonus_probability.den == 0 || bonus_probability.num >= bonus_probability.den) {
		return "bonus_probability must lie in [0, 1)";
	}
	if (time_limit.count() <= 0) {
		return "time_limit must be positive";
	}
	if (bonus_window.count() <= 0) {
		return "bonus_window must be positive";
	}
	return {};
}

auto default_levels() -> const std::vector<level_config> &
{
	using enum phishing_concept;
	static const std::vector<level_config> levels{
		{1, {malicious_url, lookalike_domain}, 1, 10, {1, 2}, std::chrono::seconds{600}, {1, 10}, std::chrono::seconds{30}},
		{2, {malicious_url, lookalike_domain, suspicious_subject}, 1, 12, {1, 2}, std::chrono::seconds{540}, {1, 10},
		 std::chrono::seconds{30}},
		{3, {malicious_url, lookalike_domain, suspicious_subject, display_name_spoof, reply_to_spoof}, 1, 14, {1, 2},
		 std::chrono::seconds{480}, {1, 10}, std::chrono::seconds{30}},
		{4, {malicious_url, lookalike_domain, suspicious_subject, display_name_spoof, reply_to_spoof, html_body}, 1, 16,
		 {1, 2}, std::chrono::seconds{480}, {1, 10}, std::chrono::seconds{30}},
		{5, {malicious_url, lookalike_domain, suspicious_subject, display_name_spoof, reply_to_spoof, html_body}, 2, 18,
		 {1, 2}, std::chrono::seconds{420}, {1, 10}, std::chrono::seconds{30}},
	};
	return levels;
}

namespace {

auto parse_int(const std::string &s) -> std::optional<long long>
{
	long long v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size()) {
		return std::nullopt;
	}
	return v;
}

auto parse_ratio(const std::string &s) -> std::optional<ratio>
{
	auto slash = s.find('/');
	if (slash == std::string::npos) {
		return std::nullopt;
	}
	auto num = parse_int(std::string{text::trim(std::string_view{s}.substr(0, slash))});
	auto den = parse_int(std::string{text::trim(std::string_view{s}.substr(slash + 1))});
	if (!num || !den || *num < 0 || *den <= 0) {
		return std::nullopt;
	}
	return ratio{static_cast<std::uint32_t>(*num), static_cast<std::uint32_t>(*den)};
}

}// namespace

auto load_levels(const key_values &kv) -> result<std::vector<level_config>, config_error>
{
	std::vector<level_config> levels = default_levels();
	if (auto count = kv.get("levels")) {
		auto n = parse_int(*count);
		if (!n || *n < 1) {
			return unexpected{config_error{0, "levels must be a positive integer"}};
		}
		while (levels.size() < static_cast<std::size_t>(*n)) {
			auto next = levels.back();
			next.level += 1;
			levels.push_back(next);
		}
		levels.resize(static_cast<std::size_t>(*n));
	}
	for (auto &lvl : levels) {
		auto prefix = "level." + std::to_string(lvl.level) + ".";
		auto bad = [&](const char *field) {
			return unexpected{config_error{0, "invalid " + prefix + field}};
		};
		if (auto v = kv.get_list(prefix + "concepts")) {
			lvl.allowed_concepts.clear();
			for (const auto &name : *v) {
				auto c = concept_from_string(name);
				if (!c) {
					return bad("concepts");
				}
				lvl.allowed_concepts.insert(*c);
			}
		}
		if (auto v = kv.get(prefix + "concepts_per_phish")) {
			auto n = parse_int(*v);
			if (!n) {
				return bad("concepts_per_phish");
			}
			lvl.concepts_per_phish = static_cast<int>(*n);
		}
		if (auto v = kv.get(prefix + "worm_count")) {
			auto n = parse_int(*v);
			if (!n) {
				return bad("worm_count");
			}
			lvl.worm_count = static_cast<int>(*n);
		}
		if (auto v = kv.get(prefix + "time_limit")) {
			auto n = parse_int(*v);
			if (!n) {
				return bad("time_limit");
			}
			lvl.time_limit = std::chrono::seconds{*n};
		}
		if (auto v = kv.get(prefix + "bonus_window")) {
			auto n = parse_int(*v);
			if (!n) {
				return bad("bonus_window");
			}
			lvl.bonus_window = std::chrono::seconds{*n};
		}
		if (auto v = kv.get(prefix + "phish_fraction")) {
			auto r = parse_ratio(*v);
			if (!r) {
				return bad("phish_fraction");
			}
			lvl.phish_fraction = *r;
		}
		if (auto v = kv.get(prefix + "bonus_probability")) {
			auto r = parse_ratio(*v);
			if (!r) {
				return bad("bonus_probability");
			}
			lvl.bonus_probability = *r;
		}
		if (auto err = lvl.validate(); !err.empty()) {
			return unexpected{config_error{0, prefix + ": " + err}};
		}
	}
	return levels;
}

auto concept_applies(phishing_concept c, const worm_content &content) -> bool
{
	return is_url_concept(c) || std::holds_alternative<email_message>(content);
}

auto mutate(phishing_concept c, const worm_content &item, const brand_directory &brands, const rule_config &cfg,
			std::uint64_t seed) -> result<worm_content, mutation_error>
{
	if (!concept_applies(c, item)) {
		return fail(mutation_error_kind::inapplicable_concept,
					std::string{to_string(c)} + " needs an email, not a bare URL");
	}
	if (const auto *u = std::get_if<url>(&item)) {
		if (c == phishing_concept::lookalike_domain) {
			auto out = lookalike_url(*u, brands, cfg, seed);
			if (!out) {
				return unexpected{out.error()};
			}
			return worm_content{std::move(out).value()};
		}
		return worm_content{malicious_url(*u, brands, cfg, seed)};
	}

	const auto &msg = std::get<email_message>(item);
	switch (c) {
	case phishing_concept::malicious_url:
	case phishing_concept::lookalike_domain:
		return url_concept_on_email(c, msg, brands, cfg, seed);
	case phishing_concept::suspicious_subject:
		return suspicious_subject(msg, cfg, seed);
	case phishing_concept::display_name_spoof:
		return display_spoof(msg, brands, seed);
	case phishing_concept::reply_to_spoof:
		return reply_to_spoof(msg, seed);
	case phishing_concept::html_body:
		return html_body(msg);
	}
	return fail(mutation_error_kind::inapplicable_concept, "unknown concept");
}

auto generate_worm(const level_config &cfg, const corpus &items, const brand_directory &brands,
				   const rule_config &rules, rng_state state) -> result<generated_worm, generate_error>
{
	if (auto err = cfg.validate(); !err.empty()) {
		return unexpected{generate_error{generate_error_kind::invalid_level, err}};
	}
	if (items.items.empty()) {
		return unexpected{generate_error{generate_error_kind::exhausted_corpus, "corpus is empty"}};
	}
	auto rng = engine_for(state);
	auto id = "w" + std::to_string(state.draws + 1);
	rng_state next{state.seed, state.draws + 1};

	bool phishing = chance(rng, cfg.phish_fraction);
	bool bonus = chance(rng, cfg.bonus_probability);

	if (!phishing) {
		const auto &item = items.items[uniform(rng, items.items.size())];
		return generated_worm{worm{id, item.content, label::legitimate, {}, bonus, {item.id, 0}}, next};
	}

	std::vector<phishing_concept> allowed(cfg.allowed_concepts.begin(), cfg.allowed_concepts.end());
	std::vector<const corpus_item *> candidates;
	for (int attempt = 0; attempt < max_redraws; ++attempt) {
		for (std::size_t i = allowed.size(); i > 1; --i) {
			std::swap(allowed[i - 1], allowed[uniform(rng, i)]);
		}
		concept_set drawn(allowed.begin(), allowed.begin() + cfg.concepts_per_phish);
		bool needs_email = std::any_of(drawn.begin(), drawn.end(), [](auto c) { return !is_url_concept(c); });

		candidates.clear();
		for (const auto &item : items.items) {
			if (!needs_email || std::holds_alternative<email_message>(item.content)) {
				candidates.push_back(&item);
			}
		}
		auto mutation_seed = rng();
		if (candidates.empty()) {
			continue;
		}
		const auto &item = *candidates[uniform(rng, candidates.size())];

		worm_content content = item.content;
		bool ok = true;
		std::uint64_t step = 0;
		for (auto c : drawn) {
			auto mutated = mutate(c, content, brands, rules, mutation_seed + golden * step++);
			if (!mutated) {
				ok = false;
				break;
			}
			content = std::move(mutated).value();
		}
		if (!ok) {
			continue;
		}
		auto found = detect(content, brands, rules).concepts();
		if (!std::includes(found.begin(), found.end(), drawn.begin(), drawn.end())) {
			continue;
		}
		return generated_worm{worm{id, std::move(content), label::phishing, drawn, bonus, {item.id, mutation_seed}}, next};
	}
	return unexpected{generate_error{generate_error_kind::exhausted_corpus,
									 "no compatible corpus item after " + std::to_string(max_redraws) + " redraws"}};
}

auto generate_bank(const level_config &cfg, std::size_t n, std::uint64_t seed, const corpus &items,
				   const brand_directory &brands, const rule_config &rules)
	-> result<std::vector<worm>, generate_error>
{
	std::vector<worm> out;
	out.reserve(n);
	rng_state state{seed, 0};
	for (std::size_t i = 0; i < n; ++i) {
		auto g = generate_worm(cfg, items, brands, rules, state);
		if (!g) {
			return unexpected{g.error()};
		}
		state = g->next;
		out.push_back(std::move(g->value));
	}
	return out;
}

auto generate_bank(int level, std::size_t n, std::uint64_t seed) -> result<std::vector<worm>, generate_error>
{
	const auto &levels = default_levels();
	if (level < 1 || static_cast<std::size_t>(level) > levels.size()) {
		return unexpected{generate_error{generate_error_kind::invalid_level, "no default config for level " +
																				 std::to_string(level)}};
	}
	return generate_bank(levels[static_cast<std::size_t>(level - 1)], n, seed, bundled_corpus(), default_brands(),
						 rule_config{});
}

auto bank_record(const worm &w) -> std::string
{
	nlohmann::ordered_json j;
	j["id"] = w.id();
	j["kind"] = w.is_email() ? "email" : "url";
	j["content"] = w.display_text();
	j["ground_truth"] = to_string(w.ground_truth());
	auto concepts = nlohmann::ordered_json::array();
	for (auto c : w.intended_concepts()) {
		concepts.push_back(to_string(c));
	}
	j["concepts"] = std::move(concepts);
	j["bonus"] = w.bonus();
	j["corpus_item"] = w.origin().corpus_item_id;
	j["seed"] = w.origin().mutation_seed;
	return j.dump();
}

}// namespace phinder
