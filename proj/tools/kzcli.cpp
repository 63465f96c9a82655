// Command line front end for the kz library.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kz/errors.hpp"
#include "kz/experiments.hpp"
#include "kz/io.hpp"

using namespace kz;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kWindow = 3 };

struct Common {
  std::string algebra;
  std::string table;
  std::uint32_t prime = Field::kDefaultPrime;
  std::uint64_t seed = 0;
  int m = -1;
  std::string out;
};

void add_common(CLI::App* app, Common& c, bool with_table, int default_m) {
  app->add_option("--algebra", c.algebra,
                  "algebra JSON file, or conca:E:R[:SEED], generic:E[:SEED], quadrics:FILE:D");
  if (with_table) app->add_option("--table", c.table, "table file (.json or .csv)");
  app->add_option("--prime", c.prime, "field characteristic")->default_val(Field::kDefaultPrime);
  app->add_option("--seed", c.seed, "random seed")->default_val(0);
  app->add_option("--m", c.m, "homological bound")->default_val(default_m);
  app->add_option("--out", c.out, "write the main output here instead of stdout");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(s);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

AlgebraSource parse_source(const std::string& text) {
  AlgebraSource src;
  auto parts = split(text, ':');
  try {
    if (!parts.empty() && parts[0] == "conca") {
      if (parts.size() < 3 || parts.size() > 4) throw ValidationError("expected conca:E:R[:SEED]");
      src.kind = AlgebraSource::Kind::Conca;
      src.e = std::stoi(parts[1]);
      src.r = std::stoi(parts[2]);
      src.seed = parts.size() == 4 ? std::stoull(parts[3]) : 0;
      return src;
    }
    if (!parts.empty() && parts[0] == "generic") {
      if (parts.size() < 2 || parts.size() > 3) throw ValidationError("expected generic:E[:SEED]");
      src.kind = AlgebraSource::Kind::Generic;
      src.e = std::stoi(parts[1]);
      src.seed = parts.size() == 3 ? std::stoull(parts[2]) : 0;
      return src;
    }
  } catch (const std::logic_error&) {
    throw ValidationError("bad algebra source " + text);
  }
  src.kind = AlgebraSource::Kind::File;
  src.path = text;
  return src;
}

GradedAlgebra load_algebra(const Common& c) {
  if (c.algebra.empty()) throw ValidationError("--algebra is required");
  auto parts = split(c.algebra, ':');
  if (!parts.empty() && parts[0] == "quadrics") {
    if (parts.size() != 3) throw ValidationError("expected quadrics:FILE:D");
    int D = 0;
    try {
      D = std::stoi(parts[2]);
    } catch (const std::logic_error&) {
      throw ValidationError("bad degree in " + c.algebra);
    }
    return from_quadrics(io::quadrics_from_json(io::read_text(parts[1])), D, c.prime);
  }
  return make_algebra(parse_source(c.algebra), c.prime);
}

ShortTable load_table(const Common& c) {
  if (c.table.empty()) throw ValidationError("--table is required");
  ShortTable T = io::read_table(c.table, c.prime);
  if (T.prime != c.prime) throw ValidationError("table prime differs from --prime");
  return T;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    io::write_text(c.out, text);
}

Vec parse_vec(const std::string& s, std::uint32_t prime) {
  Vec v;
  const Field f(prime);
  for (const auto& cell : split(s, ',')) {
    try {
      v.push_back(f.from_int(std::stoll(cell)));
    } catch (const std::logic_error&) {
      throw ValidationError("bad vector entry " + cell);
    }
  }
  return v;
}

const char* yes(bool b) { return b ? "true" : "false"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal resolutions and linear loci over short graded algebras"};
  app.require_subcommand(1);

  // betti
  Common cb;
  std::string module = "k";
  int window = -1;
  bool slice_json = false;
  auto* betti = app.add_subcommand("betti", "Betti table of k, R or a table module (CSV i,j,rank)");
  add_common(betti, cb, true, 4);
  betti->add_option("--module", module, "k, R or table (implied by --table)")->check(CLI::IsMember({"k", "R", "table"}));
  betti->add_option("--J", window, "degree window (default: largest safe)");
  betti->add_flag("--json", slice_json, "dump the slice with differentials as JSON");

  // koszul-test
  Common ck;
  auto* koszul = app.add_subcommand("koszul-test", "Is k linear to step m? Prints P_k(t) H_R(-t) mod t^(m+1)");
  add_common(koszul, ck, false, 4);

  // linearity
  Common cl;
  auto* lin = app.add_subcommand("linearity", "Three-route linearity test of a table module (CSV route,result)");
  add_common(lin, cl, true, 3);

  // witness
  Common cw;
  std::string sizes;
  std::int64_t remark = -1;
  std::uint64_t remark_trials = 50;
  auto* wit = app.add_subcommand("witness", "Construct and verify the witness modules");
  add_common(wit, cw, false, 8);
  wit->add_option("--sizes", sizes, "comma separated p:q pairs (default p:(e-1)p for p = 1, 2)");
  wit->add_option("--remark-probe", remark, "run the four-variable probe with parameter a (ignores --algebra)");
  wit->add_option("--trials", remark_trials, "tables sampled by the probe")->default_val(50);

  // sweep
  Common cs;
  SweepConfig sc;
  int shards = 1, jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Seeded density sweep over random tables (CSV)");
  add_common(sweep, cs, false, 5);
  sweep->add_option("--p", sc.p, "generators")->default_val(1);
  sweep->add_option("--q", sc.q, "degree-one dimension")->default_val(1);
  sweep->add_option("--trials", sc.trials, "number of samples")->default_val(100);
  sweep->add_option("--cross-check", sc.cross_check, "resolve every n-th sample directly")->default_val(50);
  sweep->add_option("--shards", shards, "contiguous trial ranges")->default_val(1);
  sweep->add_option("--jobs", jobs, "threads")->default_val(1);

  // intro-experiment
  Common ci;
  int ie = 3, ip = 2, retries = 20;
  auto* intro = app.add_subcommand("intro-experiment", "Random algebra with H = 1 + es + (e-1)s^2 and random p x p presentation");
  add_common(intro, ci, false, 6);
  intro->add_option("--e", ie, "variables")->default_val(3);
  intro->add_option("--p", ip, "generators")->default_val(2);
  intro->add_option("--retries", retries, "resampling budget for degenerate samples")->default_val(20);

  // series-check
  Common cq;
  std::string uv, theorem;
  int se = 0, sp = 1, sd = 0, sr = 0;
  bool series_json = false;
  auto* series = app.add_subcommand("series-check", "Hilbert and Poincare series identities and bound arithmetic");
  add_common(series, cq, true, 6);
  series->add_option("--uv", uv, "E,R,P,Q: decide q <= v p");
  series->add_option("--theorem", theorem, "series targets of a theorem variant (i, iii, iv, v, vi)");
  series->add_option("--e", se, "variables for --theorem or --extremal");
  series->add_option("--p", sp, "generators for --theorem or --extremal")->default_val(1);
  series->add_option("--d", sd, "initial degree for --theorem")->default_val(0);
  series->add_option("--r", sr, "dim R_2 for --extremal");
  bool extremal = false;
  series->add_flag("--extremal", extremal, "print p / (1 - u s t)");
  series->add_flag("--json", series_json, "machine readable coefficients");

  // conca
  Common cc;
  std::string xvec, strategy = "exhaustive";
  std::uint64_t budget = 0;
  auto* conca = app.add_subcommand("conca", "Conca generators");
  conca->require_subcommand(1);
  auto* ccheck = conca->add_subcommand("check", "Is x a Conca generator?");
  add_common(ccheck, cc, false, 0);
  ccheck->add_option("--x", xvec, "comma separated coordinates")->required();
  auto* csearch = conca->add_subcommand("search", "Search for a Conca generator");
  add_common(csearch, cc, false, 0);
  csearch->add_option("--strategy", strategy)->check(CLI::IsMember({"exhaustive", "randomized"}));
  csearch->add_option("--budget", budget, "points to try (0: default)")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*betti) {
      GradedAlgebra A = load_algebra(cb);
      if (!cb.table.empty()) module = "table";
      GradedModule M = module == "k"   ? residue_field(A)
                       : module == "R" ? regular_module(A)
                                       : table_to_module(A, load_table(cb));
      ResolutionSlice S = minimal_resolution(A, M, cb.m, window);
      emit(cb, slice_json ? io::slice_to_json(A, S) : io::betti_csv(S));
      std::cerr << "window J=" << S.J << (S.complete ? " (complete)" : " (truncated)") << '\n';
    } else if (*koszul) {
      GradedAlgebra A = load_algebra(ck);
      auto rep = koszul_to_step(A, ck.m);
      std::ostringstream os;
      os << "koszul_to_step " << ck.m << ": " << yes(rep.koszul) << '\n';
      os << "P_k(t) H_R(-t) = " << to_string(rep.product, 't') << '\n';
      std::vector<std::size_t> b;
      for (int i = 0; i <= rep.slice->m && i <= ck.m; ++i) b.push_back(rep.slice->steps[std::size_t(i)].total());
      os << "b_i:";
      for (auto v : b) os << ' ' << v;
      os << '\n';
      emit(ck, os.str());
    } else if (*lin) {
      GradedAlgebra A = load_algebra(cl);
      ShortTable T = load_table(cl);
      GradedModule M = table_to_module(A, T);
      std::ostringstream os;
      os << "route,result\n";
      const bool direct = is_m_step_linear(A, M, cl.m);
      os << "direct," << yes(direct) << '\n';
      bool disagree = false;
      try {
        const bool crit = short_linear_criterion(A, M, cl.m);
        os << "criterion," << yes(crit) << '\n';
        disagree = disagree || crit != direct;
      } catch (const PreconditionError&) {
        os << "criterion,precondition-failed\n";
      }
      try {
        auto kres = default_k_cache().get(A, cl.m + 1);
        if (!A.is_short() || !kres->linear_through(cl.m + 1)) throw PreconditionError("delta route needs a short Koszul algebra");
        const bool delta = delta_linearity_test(A, *kres, T, cl.m);
        os << "delta," << yes(delta) << '\n';
        disagree = disagree || delta != direct;
      } catch (const PreconditionError&) {
        os << "delta,precondition-failed\n";
      }
      emit(cl, os.str());
      if (disagree) {
        std::cerr << "routes disagree\n";
        return kValidation;
      }
    } else if (*wit) {
      if (remark >= 0) {
        auto rep = remark_probe(Scalar(remark % cw.prime), cw.prime, cw.m, remark_trials, cw.seed);
        emit(cw, rep.text());
      } else {
        GradedAlgebra A = load_algebra(cw);
        WitnessOptions o;
        o.m = cw.m;
        for (const auto& pq : split(sizes, ',')) {
          auto v = split(pq, ':');
          if (v.size() != 2) throw ValidationError("bad size " + pq);
          o.sizes.emplace_back(std::stoi(v[0]), std::stoi(v[1]));
        }
        auto rep = witness_suite(A, o);
        emit(cw, rep.text());
        if (!rep.all_verified()) return kValidation;
      }
    } else if (*sweep) {
      sc.source = parse_source(cs.algebra.empty() ? "conca:4:3" : cs.algebra);
      sc.m = cs.m;
      sc.seed = cs.seed;
      sc.prime = cs.prime;
      sc.out = cs.out;
      GradedAlgebra A = cs.algebra.empty() ? make_algebra(sc.source, sc.prime) : load_algebra(cs);
      auto res = density_sweep(A, sc, shards, jobs);
      emit(cs, res.csv());
      std::cerr << "elapsed " << res.elapsed_seconds << " s\n";
      if (res.tally.disagreements) {
        std::cerr << "fast path and direct resolution disagree on " << res.tally.disagreements << " samples\n";
        return kValidation;
      }
    } else if (*intro) {
      auto rep = intro_experiment(ie, ip, ci.seed, ci.m, ci.prime, retries);
      emit(ci, rep.text());
    } else if (*series) {
      std::ostringstream os;
      if (!uv.empty()) {
        auto v = split(uv, ',');
        if (v.size() != 4) throw ValidationError("--uv expects E,R,P,Q");
        auto b = uv_bound_check(std::stoll(v[0]), std::stoll(v[1]), std::stoll(v[2]), std::stoll(v[3]));
        if (series_json) {
          json j{{"admissible", b.admissible}, {"extremal", b.extremal}, {"disc", b.roots.disc()}};
          if (b.roots.rational()) {
            j["u"] = *b.roots.u();
            j["v"] = *b.roots.v();
          }
          os << j.dump() << '\n';
        } else {
          os << "disc=" << b.roots.disc() << " admissible=" << yes(b.admissible) << " extremal=" << yes(b.extremal);
          if (b.roots.rational()) os << " u=" << *b.roots.u() << " v=" << *b.roots.v();
          os << '\n';
        }
      } else if (!theorem.empty()) {
        auto ts = per_theorem_series(se, sp, sd, parse_variant(theorem), cq.m + 1);
        if (series_json) {
          os << "{\"H_M\":" << io::series_to_json(ts.H_M) << ",\"H_base\":" << io::series_to_json(ts.H_base);
          if (ts.P) os << ",\"P\":" << io::series_to_json(*ts.P);
          os << "}\n";
        } else {
          os << "H_M = " << to_string(ts.H_M) << '\n' << (ts.base_is_Q ? "H_Q = " : "H_R = ") << to_string(ts.H_base) << '\n';
          if (ts.P) os << "P_M = " << to_string(*ts.P) << '\n';
        }
      } else if (extremal) {
        auto P = extremal_poincare(se, sr, sp, sd, cq.m + 1);
        os << (series_json ? io::series_to_json(P) : "P = " + to_string(P) + "\n");
      } else {
        GradedAlgebra A = load_algebra(cq);
        PowerSeries H = hilbert(A);
        auto rep = koszul_to_step(A, cq.m);
        std::vector<std::int64_t> b;
        for (int i = 0; i <= std::min(cq.m, rep.slice->m); ++i)
          b.push_back(std::int64_t(rep.slice->steps[std::size_t(i)].total()));
        const bool kid = rep.koszul && check_koszul_identity(PowerSeries(LaurentPoly(0, b), cq.m + 1), H);
        if (series_json) {
          os << "{\"H_R\":" << io::series_to_json(H) << ",\"product\":" << io::series_to_json(rep.product)
             << ",\"koszul\":" << yes(rep.koszul) << ",\"identity\":" << yes(kid) << "}\n";
        } else {
          os << "H_R = " << to_string(H) << '\n';
          os << "P_k(t) H_R(-t) = " << to_string(rep.product, 't') << '\n';
          os << "koszul to step " << cq.m << ": " << yes(rep.koszul) << ", identity holds: " << yes(kid) << '\n';
        }
        if (!cq.table.empty()) {
          ShortTable T = load_table(cq);
          GradedModule M = table_to_module(A, T);
          ResolutionSlice S = minimal_resolution(A, M, cq.m);
          TruncSeries P = S.poincare();
          const bool linear = S.linear_through(cq.m);
          const bool id = check_linear_identity(P, H, hilbert(M), M.indeg());
          if (series_json)
            os << "{\"P_M\":" << io::series_to_json(P) << ",\"linear\":" << yes(linear) << ",\"identity\":" << yes(id) << "}\n";
          else
            os << "P_M = " << to_string(P) << "\nlinear to step " << cq.m << ": " << yes(linear)
               << ", linearity identity holds: " << yes(id) << '\n';
        }
      }
      emit(cq, os.str());
    } else if (*conca) {
      GradedAlgebra A = load_algebra(cc);
      std::ostringstream os;
      if (*ccheck) {
        os << yes(conca_check(A, parse_vec(xvec, A.prime))) << '\n';
      } else {
        auto r = conca_search(A, strategy == "exhaustive" ? SearchStrategy::Exhaustive : SearchStrategy::Randomized, budget,
                              cc.seed);
        switch (r.status) {
          case SearchStatus::Found: {
            os << "found";
            for (auto v : *r.x) os << ' ' << v;
            break;
          }
          case SearchStatus::ProvenAbsent: os << "absent"; break;
          case SearchStatus::BudgetExhausted: os << "budget-exhausted"; break;
        }
        os << " tried=" << r.tried << '\n';
      }
      emit(cc, os.str());
    }
  } catch (const WindowError& e) {
    std::cerr << "window exceeded: " << e.what() << " (max safe degree " << e.max_safe_degree << ")\n";
    return kWindow;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
