#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "instance.hpp"
#include "solution.hpp"

// Text formats.
//
// Instance:
//   dims X Y Z
//   blocked N        followed by N lines "x y z", lexicographically sorted
//   pipes K          followed by K lines "sx sy sz gx gy gz"
//   # meta env=<empty|obstacles> seed=<u64> density=<real>     (optional)
//
// Solution:
//   cost C
//   lb L             ("lb -" when no bound is known)
//   route k M        followed by M lines "x y z", once per pipe
//   # status <name> w=<real>                                   (optional)

namespace piperoute {

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

/// Tokenizing line reader; blank lines are skipped, '#' lines are collected.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::vector<std::string_view>& tokens) {
    while (pos_ < text_.size()) {
      auto eol = text_.find('\n', pos_);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos_, eol - pos_);
      pos_ = eol + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      tokens.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
      }
      if (tokens.empty()) continue;
      if (tokens.front().starts_with("#")) {
        comments.push_back(tokens);
        continue;
      }
      return true;
    }
    return false;
  }

  int line_no() const { return line_no_; }

  std::vector<std::vector<std::string_view>> comments;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

template <class Int>
Int parse_int(std::string_view tok, int line) {
  Int v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw InvalidInstance("line " + std::to_string(line) + ": expected integer, got '" + std::string(tok) + "'");
  }
  return v;
}

inline double parse_real(std::string_view tok, int line) {
  double v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw InvalidInstance("line " + std::to_string(line) + ": expected number, got '" + std::string(tok) + "'");
  }
  return v;
}

inline void expect_header(LineReader& r, std::vector<std::string_view>& t, std::string_view key,
                          std::size_t arity) {
  if (!r.next(t)) throw InvalidInstance("unexpected end of input, expected '" + std::string(key) + "'");
  if (t[0] != key || t.size() != arity + 1) {
    throw InvalidInstance("line " + std::to_string(r.line_no()) + ": expected '" + std::string(key) + "' with " +
                          std::to_string(arity) + " value(s)");
  }
}

inline Coord parse_coord(const std::vector<std::string_view>& t, std::size_t at, int line) {
  return {parse_int<int>(t[at], line), parse_int<int>(t[at + 1], line), parse_int<int>(t[at + 2], line)};
}

inline void expect_arity(const std::vector<std::string_view>& t, std::size_t n, int line) {
  if (t.size() != n) {
    throw InvalidInstance("line " + std::to_string(line) + ": expected " + std::to_string(n) + " values");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << bytes;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace detail

inline std::string encode_instance(const Instance& inst) {
  std::string out;
  const Dims& d = inst.grid.dims();
  out += "dims " + std::to_string(d.x) + ' ' + std::to_string(d.y) + ' ' + std::to_string(d.z) + '\n';
  const auto blocked = inst.grid.blocked_cells();
  out += "blocked " + std::to_string(blocked.size()) + '\n';
  for (const auto& c : blocked) {
    out += std::to_string(c.x) + ' ' + std::to_string(c.y) + ' ' + std::to_string(c.z) + '\n';
  }
  out += "pipes " + std::to_string(inst.pipes.size()) + '\n';
  for (const auto& p : inst.pipes) {
    out += std::to_string(p.start.x) + ' ' + std::to_string(p.start.y) + ' ' + std::to_string(p.start.z) + ' ' +
           std::to_string(p.goal.x) + ' ' + std::to_string(p.goal.y) + ' ' + std::to_string(p.goal.z) + '\n';
  }
  if (inst.meta) {
    out += "# meta env=" + std::string(to_string(inst.meta->env)) + " seed=" + std::to_string(inst.meta->seed) +
           " density=" + detail::format_real(inst.meta->density) + '\n';
  }
  return out;
}

/// Parses and validates an instance. Throws InvalidInstance.
inline Instance decode_instance(std::string_view text) {
  detail::LineReader r(text);
  std::vector<std::string_view> t;

  detail::expect_header(r, t, "dims", 3);
  const Dims dims{detail::parse_int<int>(t[1], r.line_no()), detail::parse_int<int>(t[2], r.line_no()),
                  detail::parse_int<int>(t[3], r.line_no())};
  if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) throw InvalidInstance("dims must be positive");
  if (dims.cell_count() >= (std::size_t{1} << 32)) throw InvalidInstance("grid too large");

  detail::expect_header(r, t, "blocked", 1);
  const auto n_blocked = detail::parse_int<std::size_t>(t[1], r.line_no());
  if (n_blocked > dims.cell_count()) throw InvalidInstance("more blocked cells than grid cells");
  std::vector<std::uint8_t> flags(dims.cell_count(), 0);
  Grid probe(Dims{dims});
  for (std::size_t i = 0; i < n_blocked; ++i) {
    if (!r.next(t)) throw InvalidInstance("unexpected end of input in blocked list");
    detail::expect_arity(t, 3, r.line_no());
    const Coord c = detail::parse_coord(t, 0, r.line_no());
    if (!probe.contains(c)) {
      throw InvalidInstance("line " + std::to_string(r.line_no()) + ": blocked cell " + to_string(c) + " out of bounds");
    }
    auto& f = flags[probe.index(c)];
    if (f) throw InvalidInstance("line " + std::to_string(r.line_no()) + ": duplicate blocked cell " + to_string(c));
    f = 1;
  }

  Instance inst{Grid(dims, std::move(flags)), {}, std::nullopt};
  detail::expect_header(r, t, "pipes", 1);
  const auto k = detail::parse_int<std::size_t>(t[1], r.line_no());
  if (k > dims.cell_count()) throw InvalidInstance("more pipes than grid cells");
  for (std::size_t i = 0; i < k; ++i) {
    if (!r.next(t)) throw InvalidInstance("unexpected end of input in pipe list");
    detail::expect_arity(t, 6, r.line_no());
    inst.pipes.push_back({static_cast<int>(i), detail::parse_coord(t, 0, r.line_no()),
                          detail::parse_coord(t, 3, r.line_no())});
  }
  if (r.next(t)) throw InvalidInstance("line " + std::to_string(r.line_no()) + ": trailing content");

  for (const auto& c : r.comments) {
    if (c[0] != "#" || c.size() < 2 || c[1] != "meta") continue;
    GeneratorInfo info;
    for (std::size_t i = 2; i < c.size(); ++i) {
      const auto eq = c[i].find('=');
      if (eq == std::string_view::npos) throw InvalidInstance("malformed meta field '" + std::string(c[i]) + "'");
      const auto key = c[i].substr(0, eq);
      const auto val = c[i].substr(eq + 1);
      if (key == "env") {
        auto e = parse_env(val);
        if (!e) throw InvalidInstance("unknown env '" + std::string(val) + "'");
        info.env = *e;
      } else if (key == "seed") {
        info.seed = detail::parse_int<std::uint64_t>(val, 0);
      } else if (key == "density") {
        info.density = detail::parse_real(val, 0);
      }
    }
    inst.meta = info;
  }
  validate_instance(inst);
  return inst;
}

inline std::string encode_solution(const Solution& sol) {
  std::string out;
  out += "cost " + std::to_string(sol.cost) + '\n';
  out += "lb " + (sol.lower_bound ? std::to_string(*sol.lower_bound) : std::string("-")) + '\n';
  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    const auto& v = sol.routes[k].vertices;
    out += "route " + std::to_string(k) + ' ' + std::to_string(v.size()) + '\n';
    for (const auto& c : v) out += std::to_string(c.x) + ' ' + std::to_string(c.y) + ' ' + std::to_string(c.z) + '\n';
  }
  out += "# status " + std::string(to_string(sol.status)) + " w=" + detail::format_real(sol.w) + '\n';
  return out;
}

/// Parses a solution file. Syntax only; feasibility is the validator's job.
inline Solution decode_solution(std::string_view text) {
  detail::LineReader r(text);
  std::vector<std::string_view> t;
  Solution sol;
  sol.status = Status::Heuristic;

  detail::expect_header(r, t, "cost", 1);
  sol.cost = detail::parse_int<std::int64_t>(t[1], r.line_no());
  detail::expect_header(r, t, "lb", 1);
  if (t[1] != "-") sol.lower_bound = detail::parse_int<std::int64_t>(t[1], r.line_no());

  while (r.next(t)) {
    if (t[0] != "route" || t.size() != 3) {
      throw InvalidInstance("line " + std::to_string(r.line_no()) + ": expected 'route k M'");
    }
    const auto k = detail::parse_int<std::size_t>(t[1], r.line_no());
    const auto m = detail::parse_int<std::size_t>(t[2], r.line_no());
    if (k != sol.routes.size()) throw InvalidInstance("line " + std::to_string(r.line_no()) + ": routes out of order");
    Route route;
    for (std::size_t i = 0; i < m; ++i) {
      if (!r.next(t)) throw InvalidInstance("unexpected end of input in route " + std::to_string(k));
      detail::expect_arity(t, 3, r.line_no());
      route.vertices.push_back(detail::parse_coord(t, 0, r.line_no()));
    }
    sol.routes.push_back(std::move(route));
  }
  for (const auto& c : r.comments) {
    if (c.size() < 3 || c[0] != "#" || c[1] != "status") continue;
    if (auto s = parse_status(c[2])) sol.status = *s;
    for (std::size_t i = 3; i < c.size(); ++i)
      if (c[i].starts_with("w=")) sol.w = detail::parse_real(c[i].substr(2), 0);
  }
  return sol;
}

inline Instance load_instance(const std::string& path) { return decode_instance(detail::read_file(path)); }
inline void save_instance(const std::string& path, const Instance& inst) {
  detail::write_file(path, encode_instance(inst));
}
inline Solution load_solution(const std::string& path) { return decode_solution(detail::read_file(path)); }
inline void save_solution(const std::string& path, const Solution& sol) {
  detail::write_file(path, encode_solution(sol));
}

}  // namespace piperoute
