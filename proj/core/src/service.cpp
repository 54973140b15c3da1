#include "wlb/service.hpp"

#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wlb/evaluate.hpp"

namespace wlb {

namespace {

using nlohmann::json;

json error_response(const std::string& code, const std::string& detail) {
  return json{{"error", code}, {"detail", detail}};
}

json handle_parsed(const Benchmark& bench, const json& req) {
  if (!req.is_object() || !req.contains("op")) {
    return error_response("malformed", "request must be an object with an 'op'");
  }
  const std::string op = req.at("op").is_string()
                             ? req.at("op").get<std::string>()
                             : std::string{};

  if (op == "info") {
    json tolerances = json::array();
    for (double t : kDiscreteTolerances) tolerances.push_back(t);
    return json{
        {"name", bench.name()},
        {"d", bench.d()},
        {"bounds", json::array({-1, 1})},
        {"fidelity",
         {{"kind", bench.fidelity().kind == FidelitySchedule::Kind::discrete
                       ? "discrete"
                       : "continuous"},
          {"levels", bench.fidelity().n_levels()},
          {"tolerances", tolerances}}},
    };
  }

  if (op == "eval") {
    if (!req.contains("z") || !req.at("z").is_array()) {
      return error_response("malformed", "'z' must be an array of numbers");
    }
    const auto& zj = req.at("z");
    if (static_cast<Eigen::Index>(zj.size()) != bench.d()) {
      json err = error_response("dimension", "z has the wrong length");
      err["expected"] = bench.d();
      err["got"] = zj.size();
      return err;
    }
    Eigen::VectorXd z(bench.d());
    for (Eigen::Index j = 0; j < bench.d(); ++j) {
      const auto& v = zj[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        return error_response("malformed", "'z' must contain only numbers");
      }
      z[j] = v.get<double>();
    }

    FidelitySpec fid = bench.fidelity().highest();
    if (req.contains("fidelity")) {
      const auto& fj = req.at("fidelity");
      try {
        if (fj.contains("discrete")) {
          const int level = fj.at("discrete").get<int>();
          fidelity_from_resource(level);
          fid = FidelitySpec::at_level(level);
        } else if (fj.contains("continuous")) {
          const double l = fj.at("continuous").get<double>();
          fidelity_from_resource(l);
          fid = FidelitySpec::at_continuous(l);
        } else {
          return error_response("fidelity",
                                "expected {\"discrete\":k} or {\"continuous\":l}");
        }
      } catch (const std::exception& e) {
        return error_response("fidelity", e.what());
      }
    }

    // Fresh evaluator per request: stateless, so replies are pure functions
    // of (benchmark, z, fidelity).
    Evaluator ev(bench, 0);
    const EvalRecord& rec = ev.evaluate_z(z, fid);
    return json{{"loss", rec.loss},
                {"raw_loss", rec.raw_loss},
                {"cost_units", rec.cost_units}};
  }

  return error_response("op", "unknown op '" + op + "'");
}

}  // namespace

std::string handle_eval_request(const Benchmark& bench,
                                std::string_view request_line) {
  json req;
  try {
    req = json::parse(request_line);
  } catch (const std::exception& e) {
    return error_response("malformed", e.what()).dump();
  }
  try {
    return handle_parsed(bench, req).dump();
  } catch (const std::exception& e) {
    return error_response("internal", e.what()).dump();
  }
}

void serve_stdio(const Benchmark& bench, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << handle_eval_request(bench, line) << '\n';
    out.flush();
  }
}

namespace {

void serve_connection(const Benchmark& bench, int fd) {
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t got = ::recv(fd, chunk, sizeof(chunk), 0);
    if (got <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(got));
    std::size_t newline;
    while ((newline = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      if (line.empty()) continue;
      const std::string reply = handle_eval_request(bench, line) + "\n";
      std::size_t sent = 0;
      while (sent < reply.size()) {
        const ssize_t w = ::send(fd, reply.data() + sent, reply.size() - sent, 0);
        if (w <= 0) {
          ::close(fd);
          return;
        }
        sent += static_cast<std::size_t>(w);
      }
    }
  }
  ::close(fd);
}

}  // namespace

void serve_tcp(const Benchmark& bench, std::uint16_t port,
               const std::function<void(std::uint16_t)>& on_listening,
               std::atomic<bool>* stop) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw std::runtime_error("socket() failed");
  const int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(listener);
    throw std::runtime_error("bind() failed (port in use?)");
  }
  if (::listen(listener, 16) < 0) {
    ::close(listener);
    throw std::runtime_error("listen() failed");
  }

  socklen_t len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));

  std::vector<std::thread> workers;
  for (;;) {
    pollfd pfd{listener, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (stop != nullptr && stop->load()) break;
    if (ready <= 0) continue;
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    workers.emplace_back([&bench, fd] { serve_connection(bench, fd); });
  }
  ::close(listener);
  for (auto& worker : workers) worker.join();
}

}  // namespace wlb
