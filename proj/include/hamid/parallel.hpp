// Copyright 2026 The hamid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAMID_PARALLEL_HPP
#define HAMID_PARALLEL_HPP

#include <exception>
#include <thread>
#include <vector>

namespace hamid {

/// Calls body(i) for i in [0, n) on up to `threads` workers. Callers write
/// results into per-index slots and reduce afterwards in index order, so
/// results do not depend on scheduling. The exception of the lowest failing
/// index is rethrown.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  if (n <= 0) return;
  const int workers = threads < 1 ? 1 : (threads > n ? n : threads);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto run = [&](int worker) {
    for (int i = worker; i < n; i += workers) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace hamid

#endif  // HAMID_PARALLEL_HPP
