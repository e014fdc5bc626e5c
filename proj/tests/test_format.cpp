#include "doctest.h"

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "unravel/errors.hpp"
#include "unravel/game_format.hpp"
#include "unravel/rng.hpp"

using namespace unravel;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kMinimal =
    "GAME v1\n"
    "alphabet 2\n"
    "depth 2\n"
    "NODES\n"
    ".\n0\n0/0\n0/1\n1\n1/0\n1/1\n"
    "PAYOFF closed\n";

// Line and column of a parse failure, or {0, 0} when it parses.
std::pair<std::size_t, std::size_t> error_at(const std::string& text) {
    try {
        parse_game(text);
    } catch (const ParseError& e) {
        return {e.line(), e.column()};
    }
    return {0, 0};
}

std::string message(const std::string& text) {
    try {
        parse_game(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal document") {
    const GameDocument doc = parse_game(kMinimal);
    CHECK(doc.tree == fixtures::complete_binary_tree(2));
    CHECK(doc.payoff == PayoffSpec{ClosedSpec{}});
    CHECK(print_game(doc) == kMinimal);
}

TEST_CASE("comments, blank lines, CRLF and any node order") {
    const std::string text =
        "# a game\r\nGAME v1\r\n\r\nalphabet 2   # two moves\r\ndepth 2\r\nNODES\r\n1/1\r\n.\r\n1\r\n0/1\r\n0\r\n0/0\r\n1/0\r\n"
        "PAYOFF closed\r\n";
    CHECK(print_game(parse_game(text)) == kMinimal);
}

TEST_CASE("fixture files are canonical and match the worked examples") {
    for (const char* name : {"ex1", "ex2", "ex3", "ex3_taboo", "minimal", "ex1_deep_union"}) {
        CAPTURE(name);
        const std::string text = slurp(std::string(UNRAVEL_FIXTURE_DIR) + "/" + name + ".game");
        const GameDocument doc = parse_game(text);
        CHECK(print_game(doc) == text);
        CHECK(parse_game(print_game(doc)) == doc);
    }
    const auto ex2 = read_game_file(std::string(UNRAVEL_FIXTURE_DIR) + "/ex2.game");
    CHECK(ex2.tree == fixtures::ex2());
    CHECK(realize(ex2.tree, ex2.payoff).empty());
    const auto ex1 = read_game_file(std::string(UNRAVEL_FIXTURE_DIR) + "/ex1.game");
    CHECK(ex1.tree == fixtures::ex1());
    CHECK(ex1.payoff == PayoffSpec{ClosedSpec{{{1}}}});
    CHECK(read_game_file(std::string(UNRAVEL_FIXTURE_DIR) + "/ex3.game").tree == fixtures::ex3());
    CHECK(read_game_file(std::string(UNRAVEL_FIXTURE_DIR) + "/ex3_taboo.game").tree == fixtures::ex3_with_taboo());
}

TEST_CASE("union and open payoffs print back") {
    GameDocument doc = parse_game(kMinimal);
    doc.payoff = UnionSpec{{ClosedSpec{{{1}}}, ClosedSpec{{{0}}}}};
    CHECK(parse_game(print_game(doc)) == doc);
    doc.payoff = OpenSpec{ClosedSpec{{{0}, {1}}}};
    CHECK(parse_game(print_game(doc)) == doc);
}

TEST_CASE("syntax errors carry line and column") {
    CHECK(error_at("") == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(error_at("GAME v2\n") == std::pair<std::size_t, std::size_t>{1, 6});
    CHECK(error_at("GAME v1\nalphabet x\n") == std::pair<std::size_t, std::size_t>{2, 10});
    CHECK(error_at("GAME v1\nalphabet 2\ndepth 2\nNODES\n.\n0//1\n") == std::pair<std::size_t, std::size_t>{6, 3});
    CHECK(error_at("GAME v1\nalphabet 2\ndepth 2\nNODES\n.\n  2\n") == std::pair<std::size_t, std::size_t>{6, 3});
    CHECK(error_at("GAME v1\nalphabet 2\ndepth 2\nNODES\n.\n0 1\n") == std::pair<std::size_t, std::size_t>{6, 3});
    CHECK(error_at(std::string(kMinimal) + "gen\n") == std::pair<std::size_t, std::size_t>{13, 1});
    CHECK(error_at("GAME v1\n\x01") == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(message(std::string(kMinimal) + "extra\n").find("unexpected content") != std::string::npos);
}

TEST_CASE("semantic errors name the broken invariant") {
    const std::string head = "GAME v1\nalphabet 2\ndepth 2\nNODES\n.\n0\n0/0\n0/1\n1\n1/0\n1/1\n";
    CHECK(message(head + "TABOOS\n0/0 I\nPAYOFF closed\n") == "13:1: taboo at full depth");
    CHECK(message("GAME v1\nalphabet 2\ndepth 3\n").find("even") != std::string::npos);
    CHECK(message("GAME v1\nalphabet 2\ndepth 2\nNODES\n.\n0/0\nPAYOFF closed\n").find("prefix closure") !=
          std::string::npos);
    CHECK(message("GAME v1\nalphabet 2\ndepth 2\nNODES\n0\n0/0\nPAYOFF closed\n").find("root") != std::string::npos);
    CHECK(message("GAME v1\nalphabet 2\ndepth 4\nNODES\n.\n0\n0/0\nPAYOFF closed\n").find("without taboo") !=
          std::string::npos);
    CHECK(message(head + "PAYOFF closed\ngen 0/0\n").find("strictly between") != std::string::npos);
    CHECK(message(head + "PAYOFF closed\ngen .\n").find("strictly between") != std::string::npos);
    CHECK(message("GAME v1\nalphabet 2\ndepth 4\nNODES\n.\n0\n0/0\n0/0/0\n0/0/0/0\n1\nTABOOS\n1 II\nPAYOFF "
                  "closed\ngen 1\n")
              .find("generator is terminal") != std::string::npos);
    CHECK(message(head + "TABOOS\n0 I\nPAYOFF closed\n").find("non-terminal") != std::string::npos);
    CHECK(message(head + "PAYOFF union\n").find("at least one part") != std::string::npos);
    CHECK(message(head + "PAYOFF closed\ngen 2\n").find("out of range") != std::string::npos);
}

TEST_CASE("random bytes never crash the parser") {
    Rng rng(99);
    const std::string alphabet = "GAMEv1 alphabet depth NODES TABOOS PAYOFF closed open union part gen ./0123456789#I\n\r\t";
    for (int i = 0; i < 2000; ++i) {
        std::string text;
        const std::size_t n = rng.below(200);
        for (std::size_t j = 0; j < n; ++j)
            text += rng.coin() ? static_cast<char>(rng.below(256)) : alphabet[rng.below(alphabet.size())];
        try {
            const GameDocument doc = parse_game(text);
            CHECK(parse_game(print_game(doc)) == doc);
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
    }
}
