#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anml/ast.hpp"
#include "chronicle.hpp"
#include "model.hpp"

namespace fape::anml {

struct LowerResult {
  std::shared_ptr<Domain> domain;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

// Builds the planning domain from a (merged) parsed document: types, objects,
// state variables, static relations and action templates. Each
// :decomposition block becomes its own template achieving the action's task.
LowerResult lowerDomain(const ParsedDocument& doc);

struct ProblemResult {
  std::optional<Chronicle> chronicle;
  std::vector<ParseError> errors;
  std::map<std::string, Timepoint> namedTimepoints;
  bool ok() const { return errors.empty() && chronicle.has_value(); }
};

// Materializes the initial chronicle from the document's top-level
// statements: assignments, expected evolution, goals, task requests.
ProblemResult buildInitialChronicle(
    std::shared_ptr<const Domain> domain, const ParsedDocument& doc,
    std::shared_ptr<const InstantiationRelations> grounding = nullptr);

// Canonical text form of a lowered domain; parses back into an isomorphic
// domain (fresh names aside).
std::string printDomainAnml(const Domain& d);

// Structural comparison used by round-trip checks.
bool structurallyIsomorphic(const Domain& a, const Domain& b);

}  // namespace fape::anml
