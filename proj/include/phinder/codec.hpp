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
 * JSON forms of engine values. state_json is the canonical full snapshot
 * (hashed for replay digests); the *_view functions are what a client may
 * see and never reveal the answer for a worm still in play.
 */

#ifndef PHINDER_CODEC_HPP
#define PHINDER_CODEC_HPP

#include "phinder/engine.hpp"

#include <json.hpp>

#include <string>

namespace phinder {

using json = nlohmann::ordered_json;

auto report_json(const detection_report &r) -> json;
auto feedback_json(const feedback &fb) -> json;
auto state_json(const game_state &s) -> json;

/* First 16 hex digits of SHA-256 over the compact canonical state. */
auto state_digest(const game_state &s) -> std::string;

/*
 * Client projection of a state. While a worm is unresolved the view carries
 * its text, id and bonus flag only; the quiz options appear only while the
 * quiz is open.
 */
auto state_view(const game_state &s) -> json;

/* Client projection of a feedback; concepts stay hidden while the quiz is open. */
auto feedback_view(const feedback &fb) -> json;

auto action_json(const player_action &a) -> json;
auto action_from_json(const json &j) -> result<player_action, std::string>;

}// namespace phinder

#endif
