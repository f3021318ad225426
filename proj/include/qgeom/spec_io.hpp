// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spec_io.hpp
 * @brief JSON documents: model specs, loop specs, POVM files and theta lists.
 *
 * The formats are described in schema/qgeom.schema.json. Parsing errors are
 * SpecError with a message that starts with the offending field path.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qgeom/estimation.hpp"
#include "qgeom/model.hpp"

namespace qgeom {

using ordered_json = nlohmann::ordered_json;

/// Parses a file (or "-" for standard input); syntax errors become SpecError.
[[nodiscard]] ordered_json read_json_file(const std::string& path);
[[nodiscard]] ordered_json parse_json_text(std::string_view text, const std::string& origin = "document");

/// A validated model document in normal form.
class ModelSpec {
  public:
    [[nodiscard]] static ModelSpec parse(const ordered_json& document);

    [[nodiscard]] const ordered_json& document() const noexcept { return doc_; }
    [[nodiscard]] ordered_json serialize() const { return doc_; }
    [[nodiscard]] PureStateModel build() const;

    [[nodiscard]] bool is_catalog() const;
    /// Catalog name, or the tabulated model's name.
    [[nodiscard]] std::string name() const;

  private:
    explicit ModelSpec(ordered_json doc) : doc_(std::move(doc)) {}
    ordered_json doc_;
};

[[nodiscard]] PureStateModel parse_model_spec(const ordered_json& document);

struct LoopSpec {
    std::vector<Theta> points;
    bool closed = false;
};

/// {"points": [...]} or {"polyline": {"vertices": [...], "subdivisions": K}},
/// optional "closed". `m` is the parameter count the points must have.
[[nodiscard]] LoopSpec parse_loop_spec(const ordered_json& document, std::size_t m);

/// "a,b;c,d" -> {(a,b),(c,d)}. With m = 1 a single group "a,b,c" is three points.
[[nodiscard]] std::vector<Theta> parse_theta_list(std::string_view text, std::size_t m);

/// {"kind": "povm", "labels": [...], "elements": [matrix, ...]}; matrices are
/// row lists of [re, im] pairs in orthonormal coordinates of `space`.
[[nodiscard]] Povm parse_povm_spec(const ordered_json& document, const Space& space);

/// JSON helpers shared by the CLI.
[[nodiscard]] ordered_json to_json(const RMatrix& m);
[[nodiscard]] ordered_json to_json(const RVector& v);
[[nodiscard]] ordered_json to_json(const Theta& t);

}  // namespace qgeom
