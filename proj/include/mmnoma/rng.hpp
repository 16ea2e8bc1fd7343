// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The mmnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMNOMA_RNG_HPP
#define MMNOMA_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmnoma {

using Rng = std::mt19937_64;

// Independent stream for (seed, ids...). Streams are keyed by the full id
// tuple, so e.g. make_stream(seed, {drop, attempt, user}) gives every user of
// every drop attempt its own generator.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

// CN(0, variance): real and imaginary parts each N(0, variance/2).
std::complex<double> complex_gaussian(Rng& rng, double variance = 1.0);

}  // namespace mmnoma

#endif  // MMNOMA_RNG_HPP
