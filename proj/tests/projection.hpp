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
 * Leak scan for client responses. While a worm is in play no response may
 * mention its label, its concepts or any detector output. A feedback object
 * about an earlier, already resolved worm is allowed to; so are the six quiz
 * options, which list every concept.
 */

#ifndef PHINDER_TESTS_PROJECTION_HPP
#define PHINDER_TESTS_PROJECTION_HPP

#include "phinder/codec.hpp"
#include "phinder/engine.hpp"

#include <string>
#include <vector>

namespace phinder::testing {

inline void strip_foreign_feedback(json &j, const std::string &worm_id)
{
	if (j.is_object()) {
		if (j.contains("feedback") && j["feedback"].is_object() && j["feedback"].value("worm_id", "") != worm_id) {
			j.erase("feedback");
		}
		if (j.contains("quiz") && j["quiz"].is_object()) {
			j["quiz"].erase("options");
		}
		for (auto &[k, v] : j.items()) {
			strip_foreign_feedback(v, worm_id);
		}
	}
	else if (j.is_array()) {
		for (auto &v : j) {
			strip_foreign_feedback(v, worm_id);
		}
	}
}

/* `truth` is the authoritative state at the time of the response. */
inline auto scan_for_leaks(const json &response, const game_state &truth) -> std::vector<std::string>
{
	std::vector<std::string> leaks;
	if (!truth.active_worm) {
		return leaks;
	}
	const auto &w = *truth.active_worm;
	auto copy = response;
	strip_foreign_feedback(copy, w.id());
	auto text = copy.dump();

	std::vector<std::string> forbidden{"ground_truth", "intended_concepts", "findings", "verdict",
									   "revealed",	   "\"resolved\"",		"\"phishing\"", "\"legitimate\"",
									   "\"" + std::string{to_string(w.ground_truth())} + "\""};
	for (auto c : w.intended_concepts()) {
		forbidden.emplace_back(to_string(c));
	}
	for (const auto &f : forbidden) {
		if (text.find(f) != std::string::npos) {
			leaks.push_back("worm " + w.id() + ": response contains " + f);
		}
	}
	return leaks;
}

}// namespace phinder::testing

#endif
