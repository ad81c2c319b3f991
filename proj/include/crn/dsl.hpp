// dsl.hpp: text format for reaction networks.
//
//   network        := (species-header)? statement (("," | newline) statement)*
//   species-header := "species:" name+
//   statement      := complex (arrow complex)+        arrows chain left-to-right
//   arrow          := "->" | "<->"                    "<->" expands forward first
//   complex        := "0" | term ("+" term)*
//   term           := (integer)? name
//   name           := [A-Za-z_][A-Za-z0-9_'-]*
//
// Spaces and tabs are insignificant; newlines separate statements. A hyphen
// belongs to a name unless followed by '>', so X-p and F3--X-pp are names
// while X->Y contains an arrow.

#pragma once

#include <stdexcept>
#include <string>

#include "crn/network.hpp"

namespace crn {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& what_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + what_),
          line(line_),
          col(col_) {}
};

ReactionNetwork parse_network(const std::string& text);

/// Canonical rendering; parse_network(render_network(net)) == net exactly
/// (same species order, same reaction order). A "species:" header line is
/// emitted only when the reaction list alone would not reproduce the
/// species order (or some species occurs in no reaction).
std::string render_network(const ReactionNetwork& net);

std::string render_complex(const ReactionNetwork& net, const Complex& c);

/// Parses a single complex ("0", "X + 2Y", ...) against an existing species
/// list; by default unknown names are an error, otherwise they are appended.
Complex parse_complex(const std::string& text, ReactionNetwork& net,
                      bool allow_new_species = false);

}  // namespace crn
