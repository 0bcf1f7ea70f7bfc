#pragma once

// JSON serialization: algebra-spec files, elements and subspaces as coefficient
// rows, one-forms, and tensor states.

#include "brstkit/affine.hpp"
#include "brstkit/liealg.hpp"
#include "brstkit/state.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace brstkit {

using Json = nlohmann::ordered_json;

/// Parses a file; InputError carries the path and, for syntax errors, the byte offset.
Json read_json_file(const std::string& path);
/// Writes with two-space indentation and a trailing newline.
void write_text_file(const std::string& path, const std::string& text);

struct AlgebraFile {
    std::shared_ptr<const LieAlgebra> alg;
    std::optional<Grading> grading;
};

/// {"name", "basis", "brackets": [[i, j, {label: "p/q"}]], "form": "killing" | table, "grading": {label: int}}.
/// Indices may be integers or labels. Structural problems (unknown labels, duplicate pairs,
/// i = j, malformed rationals) throw InputError naming the offending entry; the Jacobi identity,
/// form invariance and grading compatibility are left to the verifiers.
AlgebraFile parse_algebra(const Json& doc);
AlgebraFile load_algebra(const std::string& path);
Json algebra_json(const LieAlgebra& alg, const std::optional<Grading>& grading);

/// Rationals are strings "p/q"; plain JSON integers are accepted on input.
Rat rat_from_json(const Json& v);

/// Either a {label: "p/q"} map or a dense array over the basis.
Element parse_element(const LieAlgebra& alg, const Json& v);
std::vector<Element> parse_subspace(const LieAlgebra& alg, const Json& v);
Grading parse_grading(const LieAlgebra& alg, const Json& v);
/// Dense coefficient row of strings.
Json element_json(const Element& x);
Json subspace_json(const std::vector<Element>& span);

/// [[loop label or index, mode, "p/q"], ...] over the loop basis.
OneForm parse_one_form(const LoopAlgebra& loop, const Json& v);
Json one_form_json(const LoopAlgebra& loop, const OneForm& beta);

/// {"current": [[label, mode, mult]], "fermions": [[family, label, mode]], "bosons": [[label, mode, mult]]}.
Json mono_json(const TensorMono& m, const StateLabels& labels);

}  // namespace brstkit
