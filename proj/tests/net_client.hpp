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

/* Blocking HTTP and WebSocket client used by the service contract tests. */

#ifndef PHINDER_TESTS_NET_CLIENT_HPP
#define PHINDER_TESTS_NET_CLIENT_HPP

#include "phinder/codec.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <string>

namespace phinder::testing {

namespace net = boost::asio;
namespace beast = boost::beast;

struct http_result {
	unsigned status = 0;
	std::string body;
	std::string content_type;

	[[nodiscard]] auto json_body() const -> json { return json::parse(body); }
};

inline auto http_call(unsigned short port, beast::http::verb verb, const std::string &target,
					  const std::string &body = {}) -> http_result
{
	net::io_context ioc;
	beast::tcp_stream stream(ioc);
	stream.connect(net::ip::tcp::endpoint{net::ip::make_address("127.0.0.1"), port});
	beast::http::request<beast::http::string_body> req{verb, target, 11};
	req.set(beast::http::field::host, "127.0.0.1");
	req.set(beast::http::field::content_type, "application/json");
	req.body() = body;
	req.prepare_payload();
	beast::http::write(stream, req);
	beast::flat_buffer buffer;
	beast::http::response<beast::http::string_body> res;
	beast::http::read(stream, buffer, res);
	beast::error_code ec;
	stream.socket().shutdown(net::ip::tcp::socket::shutdown_both, ec);
	return {res.result_int(), res.body(), std::string{res[beast::http::field::content_type]}};
}

class ws_client {
public:
	ws_client(unsigned short port, const std::string &target)
		: ws_(ioc_)
	{
		beast::get_lowest_layer(ws_).connect(net::ip::tcp::endpoint{net::ip::make_address("127.0.0.1"), port});
		ws_.handshake("127.0.0.1", target);
	}

	/* No close handshake: the server may already be gone. */
	~ws_client()
	{
		beast::error_code ec;
		beast::get_lowest_layer(ws_).socket().close(ec);
	}

	ws_client(const ws_client &) = delete;
	auto operator=(const ws_client &) -> ws_client & = delete;

	auto read() -> json
	{
		beast::flat_buffer buffer;
		ws_.read(buffer);
		return json::parse(beast::buffers_to_string(buffer.data()));
	}

	void send(const json &j)
	{
		ws_.text(true);
		ws_.write(net::buffer(j.dump()));
	}

	/* Reads frames until a state frame with at least `seq` arrives. */
	auto read_state(std::uint64_t seq) -> json
	{
		while (true) {
			auto f = read();
			if (f["type"] == "state" && f["seq"].get<std::uint64_t>() >= seq) {
				return f;
			}
		}
	}

private:
	net::io_context ioc_;
	beast::websocket::stream<beast::tcp_stream> ws_;
};

}// namespace phinder::testing

#endif
