#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pshcheck/expr.hpp"

namespace psh {

/// Ground-truth label of a catalog function.
///
/// Complex-space entries use Psh / NotPsh / Harmonic (pluriharmonic) /
/// SubharmonicOnly (subharmonic on R^{2n} but not psh). Real-space entries,
/// used for the weighted-mean operators on R^m, use Subharmonic /
/// NotSubharmonic / Harmonic.
enum class Label { Psh, NotPsh, Harmonic, SubharmonicOnly, Subharmonic, NotSubharmonic };
enum class Smoothness { C2, UscOnly };
enum class Space { Complex, Real };

std::string_view to_string(Label label);
std::string_view to_string(Smoothness s);
std::string_view to_string(Space s);
std::optional<Label> label_from_string(std::string_view text);

struct CatalogEntry {
  std::string name;
  std::string expression;
  Space space = Space::Complex;
  /// Complex dimension n for Space::Complex, real dimension m for Space::Real.
  std::size_t dimension = 0;
  Label label = Label::Psh;
  Smoothness smoothness = Smoothness::C2;
  std::string provenance;

  expr::Expression compile() const { return expr::Expression(expression); }
  /// Real dimension of the natural domain (2n or m).
  std::size_t real_dimension() const { return space == Space::Complex ? 2 * dimension : dimension; }
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog_entry(std::string_view name);

}  // namespace psh
