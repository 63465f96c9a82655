#pragma once

#include <optional>
#include <string>

#include "kz/algebra.hpp"
#include "kz/resolution.hpp"
#include "kz/series.hpp"
#include "kz/shortmod.hpp"

/// Flat-file formats. Parsers throw ValidationError on malformed or inconsistent input.
namespace kz::io {

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// {prime, D, dims, act, exact?}: act[l][t] is a dims[t] x dims[t+1] row-major array whose row a
/// lists x_l times basis vector a of R_t in the basis of R_{t+1}. A missing "exact" means true.
GradedAlgebra algebra_from_json(const std::string& text, std::optional<std::uint32_t> prime = std::nullopt);
std::string algebra_to_json(const GradedAlgebra& A);
GradedAlgebra read_algebra(const std::string& path, std::optional<std::uint32_t> prime = std::nullopt);

/// {e, quadrics}: one coefficient per monomial x_l x_l' (l <= l', lex order) per quadric.
QuadricPresentation quadrics_from_json(const std::string& text);
std::string quadrics_to_json(const QuadricPresentation& P);

/// {e, p, q, rows, prime?}: rows in (l, n) lex order, q entries each.
ShortTable table_from_json(const std::string& text, std::uint32_t prime = Field::kDefaultPrime);
std::string table_to_json(const ShortTable& T);
/// Header "l,n,h1,...,hq", then one line per (l, n) with 1-based l and n.
ShortTable table_from_csv(const std::string& text, std::uint32_t prime = Field::kDefaultPrime);
std::string table_to_csv(const ShortTable& T);
/// Chooses JSON or CSV by extension.
ShortTable read_table(const std::string& path, std::uint32_t prime = Field::kDefaultPrime);

/// Header "i,j,rank", nonzero entries only, ordered by i then j.
std::string betti_csv(const ResolutionSlice& S);
/// Betti table plus every recorded differential entry, each as coefficients in the basis of R_t.
std::string slice_to_json(const GradedAlgebra& A, const ResolutionSlice& S);

std::string series_to_json(const PowerSeries& H);
std::string series_to_json(const TruncSeries& P);

}  // namespace kz::io
