#pragma once

#include <string>

#include "anml/ast.hpp"

namespace fape::anml {

// Parses one .anml document. Throws ParseError with a source span.
ParsedDocument parse(const std::string& text, const std::string& file);

// Concatenates the content of b into a (domain + problem split across files).
void mergeInto(ParsedDocument& a, ParsedDocument&& b);

}  // namespace fape::anml
