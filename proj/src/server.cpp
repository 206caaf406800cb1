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

#include "phinder/server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/version.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <fstream>
#include <sstream>
#include <thread>

namespace phinder {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

auto mime_type(const std::filesystem::path &p) -> std::string_view
{
	auto ext = p.extension().string();
	if (ext == ".html" || ext == ".htm") {
		return "text/html; charset=utf-8";
	}
	if (ext == ".js" || ext == ".mjs") {
		return "text/javascript; charset=utf-8";
	}
	if (ext == ".css") {
		return "text/css; charset=utf-8";
	}
	if (ext == ".json") {
		return "application/json";
	}
	if (ext == ".svg") {
		return "image/svg+xml";
	}
	if (ext == ".png") {
		return "image/png";
	}
	return "application/octet-stream";
}

class ws_session : public std::enable_shared_from_this<ws_session> {
public:
	ws_session(tcp::socket &&socket, session_hub &hub, std::string id)
		: ws_(std::move(socket)), hub_(hub), id_(std::move(id))
	{
	}

	void run(http::request<http::string_body> req)
	{
		ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
		ws_.async_accept(req, beast::bind_front_handler(&ws_session::on_accept, shared_from_this()));
	}

private:
	void on_accept(beast::error_code ec)
	{
		if (ec) {
			return;
		}
		std::weak_ptr<ws_session> weak = shared_from_this();
		auto executor = ws_.get_executor();
		token_ = hub_.subscribe(id_, [weak, executor](const std::string &frame) {
			net::post(executor, [weak, frame] {
				if (auto self = weak.lock()) {
					self->enqueue(frame);
				}
			});
		});
		if (!token_) {
			ws_.async_close(websocket::close_reason{websocket::close_code::policy_error, "unknown session"},
							[self = shared_from_this()](beast::error_code) {});
			return;
		}
		do_read();
	}

	void do_read()
	{
		ws_.async_read(buffer_, beast::bind_front_handler(&ws_session::on_read, shared_from_this()));
	}

	void on_read(beast::error_code ec, std::size_t)
	{
		if (ec) {
			finish();
			return;
		}
		auto text = beast::buffers_to_string(buffer_.data());
		buffer_.consume(buffer_.size());
		/* actions over the socket share the session's queue with REST */
		auto body = json::parse(text, nullptr, false);
		auto r = body.is_discarded() ? reply{400, json{{"error", "bad_request"}, {"message", "not JSON"}}}
									 : hub_.submit_action(id_, body);
		enqueue(json{{"type", "reply"}, {"status", r.status}, {"body", std::move(r.body)}}.dump());
		do_read();
	}

	void enqueue(std::string frame)
	{
		queue_.push_back(std::move(frame));
		if (queue_.size() == 1) {
			write_front();
		}
	}

	void write_front()
	{
		ws_.text(true);
		ws_.async_write(net::buffer(queue_.front()),
						beast::bind_front_handler(&ws_session::on_write, shared_from_this()));
	}

	void on_write(beast::error_code ec, std::size_t)
	{
		if (ec) {
			finish();
			return;
		}
		queue_.pop_front();
		if (!queue_.empty()) {
			write_front();
		}
	}

	void finish()
	{
		if (token_) {
			hub_.unsubscribe(id_, *token_);
			token_.reset();
		}
	}

	websocket::stream<beast::tcp_stream> ws_;
	session_hub &hub_;
	std::string id_;
	std::optional<std::uint64_t> token_;
	beast::flat_buffer buffer_;
	std::deque<std::string> queue_;
};

class http_session : public std::enable_shared_from_this<http_session> {
public:
	http_session(tcp::socket &&socket, session_hub &hub, std::optional<std::filesystem::path> web_root)
		: stream_(std::move(socket)), hub_(hub), web_root_(std::move(web_root))
	{
	}

	void run()
	{
		net::dispatch(stream_.get_executor(), beast::bind_front_handler(&http_session::do_read, shared_from_this()));
	}

private:
	void do_read()
	{
		req_ = {};
		stream_.expires_after(std::chrono::seconds(30));
		http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&http_session::on_read, shared_from_this()));
	}

	void on_read(beast::error_code ec, std::size_t)
	{
		if (ec) {
			beast::error_code ignored;
			stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
			return;
		}
		if (websocket::is_upgrade(req_)) {
			if (auto id = session_hub::is_session_route(std::string_view{req_.target().data(), req_.target().size()})) {
				stream_.expires_never();
				std::make_shared<ws_session>(stream_.release_socket(), hub_, *id)->run(std::move(req_));
				return;
			}
		}
		send(handle());
	}

	auto handle() -> http::response<http::string_body>
	{
		std::string_view target{req_.target().data(), req_.target().size()};
		if (target.starts_with("/v1/") || target == "/v1") {
			std::string_view method{req_.method_string().data(), req_.method_string().size()};
			auto r = hub_.route(method, target, req_.body());
			return respond(static_cast<http::status>(r.status), "application/json", r.body.dump());
		}
		return serve_static(target);
	}

	auto serve_static(std::string_view target) -> http::response<http::string_body>
	{
		auto not_found = [&] {
			return respond(http::status::not_found, "application/json",
						   json{{"error", "not_found"}, {"message", "no such resource"}}.dump());
		};
		if (!web_root_ || req_.method() != http::verb::get) {
			return not_found();
		}
		std::string path{target.substr(0, target.find('?'))};
		if (path.find("..") != std::string::npos || path.empty() || path[0] != '/') {
			return not_found();
		}
		if (path.back() == '/') {
			path += "index.html";
		}
		auto file = *web_root_ / path.substr(1);
		std::ifstream in(file, std::ios::binary);
		if (!in || std::filesystem::is_directory(file)) {
			return not_found();
		}
		std::stringstream ss;
		ss << in.rdbuf();
		return respond(http::status::ok, mime_type(file), ss.str());
	}

	auto respond(http::status status, std::string_view type, std::string body) -> http::response<http::string_body>
	{
		http::response<http::string_body> res{status, req_.version()};
		res.set(http::field::server, "phinder");
		res.set(http::field::content_type, beast::string_view{type.data(), type.size()});
		res.keep_alive(req_.keep_alive());
		res.body() = std::move(body);
		res.prepare_payload();
		return res;
	}

	void send(http::response<http::string_body> res)
	{
		res_ = std::make_shared<http::response<http::string_body>>(std::move(res));
		http::async_write(stream_, *res_,
						  beast::bind_front_handler(&http_session::on_write, shared_from_this(), res_->need_eof()));
	}

	void on_write(bool close, beast::error_code ec, std::size_t)
	{
		res_.reset();
		if (ec || close) {
			beast::error_code ignored;
			stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
			return;
		}
		do_read();
	}

	beast::tcp_stream stream_;
	beast::flat_buffer buffer_;
	session_hub &hub_;
	std::optional<std::filesystem::path> web_root_;
	http::request<http::string_body> req_;
	std::shared_ptr<http::response<http::string_body>> res_;
};

}// namespace

struct http_server::impl {
	session_hub &hub;
	service_config cfg;
	net::io_context ioc;
	tcp::acceptor acceptor;
	net::steady_timer ticker;
	std::vector<std::thread> threads;
	std::chrono::steady_clock::time_point last_idle_check = std::chrono::steady_clock::now();

	impl(session_hub &h, service_config c)
		: hub(h), cfg(std::move(c)), ioc(static_cast<int>(cfg.threads)), acceptor(net::make_strand(ioc)),
		  ticker(net::make_strand(ioc))
	{
	}

	void do_accept()
	{
		acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
			if (ec == net::error::operation_aborted) {
				return;
			}
			if (!ec) {
				std::make_shared<http_session>(std::move(socket), hub, cfg.web_root)->run();
			}
			do_accept();
		});
	}

	void do_tick()
	{
		ticker.expires_after(cfg.tick_interval);
		ticker.async_wait([this](beast::error_code ec) {
			if (ec) {
				return;
			}
			hub.tick_all();
			auto now = std::chrono::steady_clock::now();
			if (now - last_idle_check >= std::chrono::minutes{1}) {
				last_idle_check = now;
				hub.suspend_idle();
			}
			do_tick();
		});
	}
};

http_server::http_server(session_hub &hub, service_config cfg)
	: impl_(std::make_unique<impl>(hub, std::move(cfg)))
{
}

http_server::~http_server()
{
	stop();
}

auto http_server::start() -> result<unsigned short, std::string>
{
	beast::error_code ec;
	auto address = net::ip::make_address(impl_->cfg.host, ec);
	if (ec) {
		return unexpected{"bad listen address '" + impl_->cfg.host + "': " + ec.message()};
	}
	tcp::endpoint endpoint{address, impl_->cfg.port};
	auto &acc = impl_->acceptor;
	acc.open(endpoint.protocol(), ec);
	if (!ec) {
		acc.set_option(net::socket_base::reuse_address(true), ec);
	}
	if (!ec) {
		acc.bind(endpoint, ec);
	}
	if (!ec) {
		acc.listen(net::socket_base::max_listen_connections, ec);
	}
	if (ec) {
		return unexpected{"cannot listen on " + impl_->cfg.host + ":" + std::to_string(impl_->cfg.port) + ": " +
						  ec.message()};
	}
	auto port = acc.local_endpoint().port();
	impl_->do_accept();
	impl_->do_tick();
	for (unsigned i = 0; i < impl_->cfg.threads; ++i) {
		impl_->threads.emplace_back([this] { impl_->ioc.run(); });
	}
	return port;
}

void http_server::stop()
{
	if (!impl_) {
		return;
	}
	impl_->ioc.stop();
	for (auto &t : impl_->threads) {
		if (t.joinable() && t.get_id() != std::this_thread::get_id()) {
			t.join();
		}
	}
	impl_->threads.clear();
}

void http_server::wait()
{
	for (auto &t : impl_->threads) {
		if (t.joinable()) {
			t.join();
		}
	}
}

}// namespace phinder
