#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include "wlb/benchmark.hpp"

namespace wlb {

// Newline-delimited JSON evaluation protocol:
//   {"op":"info"}                                  -> benchmark metadata
//   {"op":"eval","z":[...],"fidelity":{"discrete":3}|{"continuous":0.7}}
//                                                  -> {"loss","raw_loss","cost_units"}
// Malformed input, wrong dimension, or out-of-range fidelity produce
// {"error":...} responses; the connection stays open. Requests are stateless
// and pure: identical requests return identical losses.
std::string handle_eval_request(const Benchmark& bench,
                                std::string_view request_line);

// Serve requests line by line from `in` to `out` until EOF.
void serve_stdio(const Benchmark& bench, std::istream& in, std::ostream& out);

// Serve over TCP (one thread per connection). port 0 picks an ephemeral
// port; on_listening (if set) receives the bound port once accepting.
// `stop`, when non-null, shuts the server down cooperatively.
void serve_tcp(const Benchmark& bench, std::uint16_t port,
               const std::function<void(std::uint16_t)>& on_listening = {},
               std::atomic<bool>* stop = nullptr);

}  // namespace wlb
