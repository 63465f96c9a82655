#include "kz/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kz/errors.hpp"

namespace kz::io {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

Scalar residue(std::int64_t v, std::uint32_t prime) {
  const std::int64_t r = v % std::int64_t(prime);
  return Scalar(r < 0 ? r + prime : r);
}

std::vector<std::vector<std::int64_t>> int_rows(const json& j, const std::string& what) {
  try {
    return j.get<std::vector<std::vector<std::int64_t>>>();
  } catch (const json::exception&) {
    throw ValidationError(what + " must be an array of integer arrays");
  }
}

}  // namespace

// ---------------------------------------------------------------- algebras

GradedAlgebra algebra_from_json(const std::string& text, std::optional<std::uint32_t> prime) {
  json j = parse(text);
  GradedAlgebra A;
  A.prime = prime ? *prime : get<std::uint32_t>(j, "prime");
  if (prime && j.contains("prime") && j["prime"].get<std::uint32_t>() != *prime)
    throw ValidationError("algebra file prime differs from the requested prime");
  if (!is_prime(A.prime)) throw ValidationError("prime field characteristic is not prime");
  A.D = get<int>(j, "D");
  A.dims = get<std::vector<std::size_t>>(j, "dims");
  if (A.D < 0 || A.dims.size() != std::size_t(A.D) + 1) throw ValidationError("dims must have D+1 entries");
  if (A.dims[0] != 1) throw ValidationError("dims[0] must be 1");
  A.e = A.D >= 1 ? int(A.dims[1]) : 0;
  A.exact = j.contains("exact") ? j["exact"].get<bool>() : true;
  const json& act = j.contains("act") ? j["act"] : json::array();
  if (!act.is_array() || act.size() != std::size_t(A.e)) throw ValidationError("act must have one entry per variable");
  A.act.assign(std::size_t(A.e), {});
  for (int l = 0; l < A.e; ++l) {
    const json& per = act[std::size_t(l)];
    if (!per.is_array() || per.size() != std::size_t(A.D)) throw ValidationError("act[l] must have D matrices");
    for (int t = 0; t < A.D; ++t) {
      auto rows = int_rows(per[std::size_t(t)], "act matrix");
      const std::size_t src = A.dims[std::size_t(t)], tgt = A.dims[std::size_t(t + 1)];
      if (rows.size() != src) throw ValidationError("act matrix has the wrong number of rows");
      Matrix M(tgt, src);
      for (std::size_t a = 0; a < src; ++a) {
        if (rows[a].size() != tgt) throw ValidationError("act matrix has the wrong number of columns");
        for (std::size_t b = 0; b < tgt; ++b) M(b, a) = residue(rows[a][b], A.prime);
      }
      A.act[std::size_t(l)].push_back(std::move(M));
    }
  }
  auto rep = validate(A);
  if (!rep.ok()) throw ValidationError("invalid algebra: " + rep.summary());
  return A;
}

std::string algebra_to_json(const GradedAlgebra& A) {
  json j;
  j["prime"] = A.prime;
  j["D"] = A.D;
  j["dims"] = A.dims;
  j["exact"] = A.exact;
  json act = json::array();
  for (int l = 0; l < A.e; ++l) {
    json per = json::array();
    for (int t = 0; t < A.D; ++t) {
      const Matrix& M = A.act[std::size_t(l)][std::size_t(t)];
      json rows = json::array();
      for (std::size_t a = 0; a < M.cols; ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < M.rows; ++b) row.push_back(M(b, a));
        rows.push_back(row);
      }
      per.push_back(rows);
    }
    act.push_back(per);
  }
  j["act"] = act;
  return j.dump() + "\n";
}

GradedAlgebra read_algebra(const std::string& path, std::optional<std::uint32_t> prime) {
  return algebra_from_json(read_text(path), prime);
}

QuadricPresentation quadrics_from_json(const std::string& text) {
  json j = parse(text);
  QuadricPresentation P;
  P.e = get<int>(j, "e");
  if (P.e < 0) throw ValidationError("e must be nonnegative");
  const std::size_t n2 = std::size_t(P.e) * std::size_t(P.e + 1) / 2;
  for (const auto& row : int_rows(j.contains("quadrics") ? j["quadrics"] : json::array(), "quadrics")) {
    if (row.size() != n2) throw ValidationError("quadric has the wrong number of coefficients");
    Vec v;
    for (auto c : row) {
      if (c < 0) throw ValidationError("quadric coefficients must be nonnegative residues");
      v.push_back(Scalar(c));
    }
    P.quadrics.push_back(std::move(v));
  }
  return P;
}

std::string quadrics_to_json(const QuadricPresentation& P) {
  json j;
  j["e"] = P.e;
  j["quadrics"] = P.quadrics;
  return j.dump() + "\n";
}

// ---------------------------------------------------------------- tables

namespace {

void check_table(const ShortTable& T) {
  if (T.e < 0 || T.p < 0 || T.q < 0) throw ValidationError("table dimensions must be nonnegative");
  if (T.C.rows != std::size_t(T.e * T.p) || T.C.cols != std::size_t(T.q))
    throw ValidationError("table has the wrong shape");
}

}  // namespace

ShortTable table_from_json(const std::string& text, std::uint32_t prime) {
  json j = parse(text);
  ShortTable T;
  T.prime = j.contains("prime") ? j["prime"].get<std::uint32_t>() : prime;
  T.e = get<int>(j, "e");
  T.p = get<int>(j, "p");
  T.q = get<int>(j, "q");
  auto rows = int_rows(j.contains("rows") ? j["rows"] : json::array(), "rows");
  if (T.e < 0 || T.p < 0 || T.q < 0) throw ValidationError("table dimensions must be nonnegative");
  if (rows.size() != std::size_t(T.e * T.p)) throw ValidationError("table needs e p rows");
  T.C = Matrix(rows.size(), std::size_t(T.q));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != std::size_t(T.q)) throw ValidationError("table row needs q entries");
    for (std::size_t h = 0; h < rows[r].size(); ++h) T.C(r, h) = residue(rows[r][h], T.prime);
  }
  return T;
}

std::string table_to_json(const ShortTable& T) {
  check_table(T);
  json j;
  j["prime"] = T.prime;
  j["e"] = T.e;
  j["p"] = T.p;
  j["q"] = T.q;
  json rows = json::array();
  for (std::size_t r = 0; r < T.C.rows; ++r) rows.push_back(T.C.row_vec(r));
  j["rows"] = rows;
  return j.dump() + "\n";
}

ShortTable table_from_csv(const std::string& text, std::uint32_t prime) {
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      out.push_back(cell);
    }
    return out;
  };
  if (!std::getline(in, line)) throw ValidationError("empty table CSV");
  auto header = split(line);
  if (header.size() < 2 || header[0] != "l" || header[1] != "n") throw ValidationError("table CSV header must start with l,n");
  const int q = int(header.size()) - 2;
  for (int h = 0; h < q; ++h)
    if (header[std::size_t(h) + 2] != "h" + std::to_string(h + 1)) throw ValidationError("table CSV header must be l,n,h1..hq");
  std::vector<std::tuple<int, int, std::vector<std::int64_t>>> rows;
  int e = 0, p = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != std::size_t(q) + 2) throw ValidationError("table CSV row has the wrong number of cells");
    try {
      int l = std::stoi(cells[0]), n = std::stoi(cells[1]);
      if (l < 1 || n < 1) throw ValidationError("l and n are 1-based");
      std::vector<std::int64_t> v;
      for (int h = 0; h < q; ++h) v.push_back(std::stoll(cells[std::size_t(h) + 2]));
      e = std::max(e, l);
      p = std::max(p, n);
      rows.emplace_back(l, n, std::move(v));
    } catch (const std::logic_error&) {
      throw ValidationError("table CSV cell is not an integer");
    }
  }
  ShortTable T{prime, e, p, q, Matrix(std::size_t(e * p), std::size_t(q))};
  if (rows.size() != std::size_t(e * p)) throw ValidationError("table CSV needs one row per (l, n)");
  std::vector<char> seen(std::size_t(e * p), 0);
  for (auto& [l, n, v] : rows) {
    const int r = T.row(l - 1, n - 1);
    if (seen[std::size_t(r)]++) throw ValidationError("table CSV repeats a row");
    for (int h = 0; h < q; ++h) T.C(std::size_t(r), std::size_t(h)) = residue(v[std::size_t(h)], prime);
  }
  return T;
}

std::string table_to_csv(const ShortTable& T) {
  check_table(T);
  std::ostringstream os;
  os << "l,n";
  for (int h = 1; h <= T.q; ++h) os << ",h" << h;
  os << '\n';
  for (int l = 0; l < T.e; ++l)
    for (int n = 0; n < T.p; ++n) {
      os << l + 1 << ',' << n + 1;
      for (int h = 0; h < T.q; ++h) os << ',' << T.C(std::size_t(T.row(l, n)), std::size_t(h));
      os << '\n';
    }
  return os.str();
}

ShortTable read_table(const std::string& path, std::uint32_t prime) {
  const std::string text = read_text(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return table_from_csv(text, prime);
  return table_from_json(text, prime);
}

// ---------------------------------------------------------------- resolutions and series

std::string betti_csv(const ResolutionSlice& S) {
  std::ostringstream os;
  os << "i,j,rank\n";
  for (int i = 0; i <= S.m; ++i)
    for (const auto& [j, c] : S.steps[std::size_t(i)].betti)
      if (c) os << i << ',' << j << ',' << c << '\n';
  return os.str();
}

std::string slice_to_json(const GradedAlgebra& A, const ResolutionSlice& S) {
  json j;
  j["prime"] = S.prime;
  j["e"] = S.e;
  j["m"] = S.m;
  j["J"] = S.J;
  j["indeg"] = S.indeg;
  j["complete"] = S.complete;
  j["stopped_early"] = S.stopped_early;
  json betti = json::array();
  for (int i = 0; i <= S.m; ++i)
    for (const auto& [d, c] : S.steps[std::size_t(i)].betti)
      if (c) betti.push_back({i, d, c});
  j["betti"] = betti;
  json steps = json::array();
  for (int i = 0; i <= S.m; ++i) {
    const auto& st = S.steps[std::size_t(i)];
    json js;
    js["i"] = i;
    js["materialized"] = st.materialized;
    js["generator_degrees"] = st.gen_degrees();
    json entries = json::array();
    if (st.materialized && i >= 1) {
      const auto degs = st.gen_degrees();
      const auto tdegs = S.steps[std::size_t(i - 1)].gen_degrees();
      for (std::size_t g = 0; g < degs.size(); ++g)
        for (std::size_t gp = 0; gp < tdegs.size(); ++gp) {
          Vec v = S.entry(A, i, g, gp);
          if (std::all_of(v.begin(), v.end(), [](Scalar c) { return c == 0; })) continue;
          entries.push_back({{"row", g}, {"col", gp}, {"degree", degs[g] - tdegs[gp]}, {"coeffs", v}});
        }
    } else if (st.materialized && i == 0) {
      for (const auto& b : st.blocks)
        for (std::size_t r = 0; r < b.images.rows; ++r)
          entries.push_back({{"degree", b.deg}, {"image", b.images.row_vec(r)}});
    }
    js["entries"] = entries;
    steps.push_back(js);
  }
  j["steps"] = steps;
  return j.dump() + "\n";
}

std::string series_to_json(const PowerSeries& H) {
  json j;
  j["lo"] = H.poly.lo;
  j["coeffs"] = H.poly.c;
  if (H.exact())
    j["prec"] = nullptr;
  else
    j["prec"] = H.prec;
  return j.dump() + "\n";
}

std::string series_to_json(const TruncSeries& P) {
  json j;
  json terms = json::array();
  for (int n = 0; n < P.length(); ++n) {
    const LaurentPoly& c = P.coeff(n);
    terms.push_back({{"t", n}, {"lo", c.lo}, {"coeffs", c.c}});
  }
  j["terms"] = terms;
  if (P.exact())
    j["prec"] = nullptr;
  else
    j["prec"] = P.prec();
  return j.dump() + "\n";
}

}  // namespace kz::io
