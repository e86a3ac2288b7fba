#include "permutope/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace permutope {

using nlohmann::json;

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

// Content lines with comments stripped, tokenized on whitespace.
std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream words(text);
    Line line{number, {}};
    for (std::string w; words >> w;) line.tokens.push_back(w);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

std::size_t parse_index(const std::string& token, const std::string& source, std::size_t line) {
  std::size_t value = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(source, line, "expected a nonnegative integer, got '" + token + "'");
  }
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

}  // namespace

Graph parse_graph(std::istream& in, const std::string& source) {
  const auto lines = content_lines(in);
  if (lines.empty()) throw ParseError(source, 0, "missing header 'n <count> [directed]'");

  const Line& head = lines.front();
  const bool header_ok = (head.tokens.size() == 2 || head.tokens.size() == 3) &&
                         head.tokens[0] == "n" &&
                         (head.tokens.size() == 2 || head.tokens[2] == "directed");
  if (!header_ok) throw ParseError(source, head.number, "expected header 'n <count> [directed]'");
  const std::size_t n = parse_index(head.tokens[1], source, head.number);
  const bool directed = head.tokens.size() == 3;

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.tokens.size() != 2) {
      throw ParseError(source, line.number, "expected an edge 'u v'");
    }
    std::size_t u = parse_index(line.tokens[0], source, line.number);
    std::size_t v = parse_index(line.tokens[1], source, line.number);
    if (u >= n || v >= n) {
      throw ParseError(source, line.number,
                       "vertex out of range (n = " + std::to_string(n) + ")");
    }
    if (u == v && !directed) throw ParseError(source, line.number, "self-loop in undirected graph");
    if (!directed && u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) throw ParseError(source, line.number, "duplicate edge");
    edges.emplace_back(u, v);
  }
  return Graph(n, directed, std::move(edges));
}

Graph read_graph_file(const std::string& path) {
  auto in = open(path);
  return parse_graph(in, path);
}

RatMatrix parse_matrix(std::istream& in, const std::string& source) {
  const auto lines = content_lines(in);
  if (lines.empty()) throw ParseError(source, 0, "missing header 'rows cols'");
  const Line& head = lines.front();
  if (head.tokens.size() != 2) throw ParseError(source, head.number, "expected header 'rows cols'");
  const std::size_t rows = parse_index(head.tokens[0], source, head.number);
  const std::size_t cols = parse_index(head.tokens[1], source, head.number);

  if (lines.size() - 1 != rows) {
    const std::size_t where = lines.size() - 1 > rows ? lines[rows + 1].number : lines.back().number;
    throw ParseError(source, where,
                     "expected " + std::to_string(rows) + " rows, found " +
                         std::to_string(lines.size() - 1));
  }
  RatMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Line& line = lines[r + 1];
    if (line.tokens.size() != cols) {
      throw ParseError(source, line.number,
                       "expected " + std::to_string(cols) + " entries, found " +
                           std::to_string(line.tokens.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      try {
        m(r, c) = parse_rat(line.tokens[c]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, line.number, e.what());
      }
    }
  }
  return m;
}

RatMatrix read_matrix_file(const std::string& path) {
  auto in = open(path);
  return parse_matrix(in, path);
}

namespace {

json to_json(const Verdict& v) {
  json j;
  j["problem"] = to_string(v.problem);
  j["status"] = to_string(v.status);
  j["reason"] = v.reason ? json(to_string(*v.reason)) : json(nullptr);

  json witness = nullptr;
  if (v.p) {
    witness = {{"kind", v.q ? "pair" : "permutation"}, {"p", v.p->image()}};
    if (v.q) witness["q"] = v.q->image();
  } else if (v.assignment) {
    json entries = json::array();
    for (std::size_t x = 0; x < v.assignment->size(); ++x) {
      const Rat& value = (*v.assignment)[x];
      if (value == 0) continue;
      const VarIndex idx = v.shape.unflatten(x);
      entries.push_back({idx.i, idx.k, idx.j, idx.l, format_rat(value)});
    }
    witness = {{"kind", "assignment"}, {"m", v.shape.m}, {"n", v.shape.n}, {"entries", entries}};
  }
  j["witness"] = witness;

  if (v.certificate) {
    json mult = json::array();
    for (std::size_t r = 0; r < v.certificate->size(); ++r)
      if ((*v.certificate)[r] != 0) mult.push_back({r, format_rat((*v.certificate)[r])});
    j["certificate"] = {{"rows", v.certificate->size()}, {"multipliers", mult}};
  } else {
    j["certificate"] = nullptr;
  }

  j["relaxation"] = to_string(v.relax);
  j["toggles"] = {{"klcond", to_string(v.klcond)}, {"transposed", v.transposed}};
  j["shape"] = {v.shape.m, v.shape.n};
  j["shift"] = format_rat(v.shift);
  j["pivots"] = v.pivots;
  j["timings"] = {{"elapsed_ms", v.elapsed_ms}};
  j["notes"] = v.notes;
  if (!v.branches.empty()) {
    json branches = json::array();
    for (const auto& b : v.branches) branches.push_back(to_json(b));
    j["branches"] = branches;
  }
  return j;
}

Verdict from_json(const json& j) {
  Verdict v;
  v.problem = problem_from_string(j.at("problem").get<std::string>());
  v.status = status_from_string(j.at("status").get<std::string>());
  if (!j.at("reason").is_null()) v.reason = reason_from_string(j.at("reason").get<std::string>());
  v.shape = {j.at("shape").at(0).get<std::size_t>(), j.at("shape").at(1).get<std::size_t>()};

  const json& w = j.at("witness");
  if (!w.is_null()) {
    const auto kind = w.at("kind").get<std::string>();
    if (kind == "permutation" || kind == "pair") {
      v.p = Permutation(w.at("p").get<std::vector<std::size_t>>());
      if (kind == "pair") v.q = Permutation(w.at("q").get<std::vector<std::size_t>>());
    } else if (kind == "assignment") {
      Vec x(v.shape.num_vars());
      for (const auto& e : w.at("entries")) {
        const VarIndex idx{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                           e.at(2).get<std::size_t>(), e.at(3).get<std::size_t>()};
        if (idx.i >= v.shape.m || idx.j >= v.shape.m || idx.k >= v.shape.n ||
            idx.l >= v.shape.n) {
          throw std::invalid_argument("assignment index out of range");
        }
        x[v.shape.flatten(idx)] = parse_rat(e.at(4).get<std::string>());
      }
      v.assignment = std::move(x);
    } else {
      throw std::invalid_argument("unknown witness kind '" + kind + "'");
    }
  }

  const json& c = j.at("certificate");
  if (!c.is_null()) {
    Vec y(c.at("rows").get<std::size_t>());
    for (const auto& e : c.at("multipliers")) {
      const auto r = e.at(0).get<std::size_t>();
      if (r >= y.size()) throw std::invalid_argument("certificate row out of range");
      y[r] = parse_rat(e.at(1).get<std::string>());
    }
    v.certificate = std::move(y);
  }

  v.relax = relax_from_string(j.at("relaxation").get<std::string>());
  v.klcond = klcond_from_string(j.at("toggles").at("klcond").get<std::string>());
  v.transposed = j.at("toggles").at("transposed").get<bool>();
  v.shift = parse_rat(j.at("shift").get<std::string>());
  v.pivots = j.at("pivots").get<std::size_t>();
  v.elapsed_ms = j.at("timings").at("elapsed_ms").get<double>();
  v.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("branches"))
    for (const auto& b : j.at("branches")) v.branches.push_back(from_json(b));
  return v;
}

}  // namespace

std::string verdict_to_json(const Verdict& v) { return to_json(v).dump(); }

Verdict verdict_from_json(std::string_view text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed verdict JSON: ") + e.what());
  }
}

}  // namespace permutope
