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

/* HTTP and WebSocket front end for session_hub, on Boost.Beast. */

#ifndef PHINDER_SERVER_HPP
#define PHINDER_SERVER_HPP

#include "phinder/service.hpp"

#include <memory>

namespace phinder {

class http_server {
public:
	http_server(session_hub &hub, service_config cfg);
	~http_server();
	http_server(const http_server &) = delete;
	auto operator=(const http_server &) -> http_server & = delete;

	/* Binds and starts the worker threads; returns the bound port (useful with port 0). */
	auto start() -> result<unsigned short, std::string>;
	void stop();
	/* Blocks until stop() is called from elsewhere. */
	void wait();

private:
	struct impl;
	std::unique_ptr<impl> impl_;
};

}// namespace phinder

#endif
