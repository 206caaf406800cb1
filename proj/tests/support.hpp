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

/* Helpers shared by the test binaries. */

#ifndef PHINDER_TESTS_SUPPORT_HPP
#define PHINDER_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PHINDER_FIXTURE_DIR
#error "PHINDER_FIXTURE_DIR must be defined by the build"
#endif

namespace phinder::testing {

inline auto fixture(const std::string &name) -> std::string
{
	std::ifstream in(std::filesystem::path{PHINDER_FIXTURE_DIR} / name, std::ios::binary);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

}// namespace phinder::testing

#endif
