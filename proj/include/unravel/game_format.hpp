#pragma once

// Text format for games:
//
//   GAME v1
//   alphabet 2
//   depth 4
//   NODES
//   .
//   0
//   0/0
//   ...
//   TABOOS
//   0/0 II
//   PAYOFF closed
//   gen 1
//
// Every position is listed, the root as ".". TABOOS names the loser of each
// early terminal and may be omitted when there are none. PAYOFF is "closed" or
// "open" followed by gen lines, or "union" followed by parts, each opened by a
// line "part". '#' starts a comment.

#include <string>
#include <string_view>

#include "unravel/core.hpp"
#include "unravel/payoff.hpp"

namespace unravel {

struct GameDocument {
    int version = 1;
    std::uint32_t alphabet = 2;
    GameTree tree;
    PayoffSpec payoff;

    friend bool operator==(const GameDocument&, const GameDocument&) = default;
};

/// Throws ParseError carrying line and column.
GameDocument parse_game(std::string_view text);
GameDocument read_game_file(const std::string& path);

/// Canonical form: positions sorted, one space between fields, no comments.
std::string print_game(const GameDocument& doc);

Position parse_position(std::string_view text);

}  // namespace unravel
