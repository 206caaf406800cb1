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

#ifndef PHINDER_RESULT_HPP
#define PHINDER_RESULT_HPP

#include <stdexcept>
#include <utility>
#include <variant>

namespace phinder {

template<class E>
struct unexpected {
	E error;
};

template<class E>
unexpected(E) -> unexpected<E>;

/* Value type for results that carry nothing on success. */
struct unit {};

/* Minimal value-or-error holder; std::expected is not available on our toolchain. */
template<class T, class E>
class result {
public:
	result(T value)
		: storage_(std::in_place_index<0>, std::move(value))
	{
	}
	result(unexpected<E> err)
		: storage_(std::in_place_index<1>, std::move(err.error))
	{
	}

	[[nodiscard]] auto has_value() const noexcept -> bool
	{
		return storage_.index() == 0;
	}
	explicit operator bool() const noexcept
	{
		return has_value();
	}

	auto value() & -> T &
	{
		check();
		return std::get<0>(storage_);
	}
	auto value() const & -> const T &
	{
		check();
		return std::get<0>(storage_);
	}
	auto value() && -> T &&
	{
		check();
		return std::get<0>(std::move(storage_));
	}
	auto operator*() & -> T &
	{
		return value();
	}
	auto operator*() const & -> const T &
	{
		return value();
	}
	auto operator->() -> T *
	{
		return &value();
	}
	auto operator->() const -> const T *
	{
		return &value();
	}

	auto error() const & -> const E &
	{
		return std::get<1>(storage_);
	}

private:
	void check() const
	{
		if (!has_value()) {
			throw std::logic_error("result: value() called on an error");
		}
	}

	std::variant<T, E> storage_;
};

}// namespace phinder

#endif
