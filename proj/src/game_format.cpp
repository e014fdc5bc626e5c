#include "unravel/game_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "unravel/base_covering.hpp"
#include "unravel/errors.hpp"

namespace unravel {

namespace {

constexpr int kMaxDepth = 64;

struct Token {
    std::string_view text;
    std::size_t column = 0;  // 1-based
};

struct Line {
    std::size_t number = 0;
    std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::string_view raw = text.substr(start, end - start);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            const auto c = static_cast<unsigned char>(raw[i]);
            if (c == '#') break;
            if (c == ' ' || c == '\t') {
                ++i;
                continue;
            }
            if (c < 0x21 || c > 0x7e) throw ParseError(number, i + 1, "unexpected character");
            const std::size_t from = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '#') {
                const auto d = static_cast<unsigned char>(raw[i]);
                if (d < 0x21 || d > 0x7e) throw ParseError(number, i + 1, "unexpected character");
                ++i;
            }
            line.tokens.push_back({raw.substr(from, i - from), from + 1});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

std::uint64_t parse_number(const Token& tok, std::size_t line, std::uint64_t max, const char* what) {
    std::uint64_t value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || tok.text.empty())
        throw ParseError(line, tok.column, std::string("expected ") + what);
    if (tok.text.size() > 1 && tok.text.front() == '0')
        throw ParseError(line, tok.column, std::string(what) + " has a leading zero");
    if (value > max) throw ParseError(line, tok.column, std::string(what) + " out of range");
    return value;
}

Position parse_path(const Token& tok, std::size_t line, std::uint32_t alphabet) {
    if (tok.text == ".") return {};
    Position p;
    std::size_t i = 0;
    while (true) {
        const std::size_t slash = tok.text.find('/', i);
        const std::size_t end = slash == std::string_view::npos ? tok.text.size() : slash;
        const Token part{tok.text.substr(i, end - i), tok.column + i};
        if (part.text.empty()) throw ParseError(line, part.column, "empty move in position");
        p.push_back(static_cast<MoveLabel>(parse_number(part, line, alphabet - 1ULL, "move label")));
        if (p.size() > static_cast<std::size_t>(kMaxDepth)) throw ParseError(line, tok.column, "position too long");
        if (slash == std::string_view::npos) break;
        i = slash + 1;
    }
    return p;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lines_(tokenize(text)) {}

    GameDocument run() {
        GameDocument doc;
        header(doc);
        nodes(doc);
        taboos();
        payoff(doc);
        if (!done()) fail_at(peek(), "unexpected content after PAYOFF");
        build(doc);
        return doc;
    }

private:
    std::vector<Line> lines_;
    std::size_t at_ = 0;
    std::size_t last_line_ = 0;

    std::uint32_t alphabet_ = 0;
    int depth_ = 0;
    std::map<Position, std::size_t> node_line_;
    std::map<Position, std::pair<Player, std::size_t>> taboo_;
    std::vector<std::pair<Position, std::size_t>> generator_lines_;

    bool done() const { return at_ >= lines_.size(); }
    const Line& peek() const { return lines_[at_]; }
    const Line& take() {
        last_line_ = lines_[at_].number;
        return lines_[at_++];
    }
    [[noreturn]] void fail_at(const Line& l, const std::string& what) const {
        throw ParseError(l.number, l.tokens.front().column, what);
    }
    [[noreturn]] void fail_eof(const std::string& what) const { throw ParseError(last_line_ + 1, 1, what); }

    const Line& expect_keyword(std::string_view word, std::size_t arity) {
        if (done()) fail_eof("expected " + std::string(word));
        const Line& l = take();
        if (l.tokens.front().text != word) fail_at(l, "expected " + std::string(word));
        if (l.tokens.size() != arity + 1) {
            const Token& bad = l.tokens.size() > arity + 1 ? l.tokens[arity + 1] : l.tokens.back();
            throw ParseError(l.number, bad.column,
                             std::string(word) + " takes " + std::to_string(arity) + " argument" +
                                 (arity == 1 ? "" : "s"));
        }
        return l;
    }

    bool at_keyword(std::string_view word) const { return !done() && peek().tokens.front().text == word; }

    void header(GameDocument& doc) {
        const Line& g = expect_keyword("GAME", 1);
        if (g.tokens[1].text != "v1") throw ParseError(g.number, g.tokens[1].column, "unsupported version");
        doc.version = 1;
        const Line& a = expect_keyword("alphabet", 1);
        alphabet_ = static_cast<std::uint32_t>(parse_number(a.tokens[1], a.number, 1ULL << 31, "alphabet size"));
        if (alphabet_ == 0) throw ParseError(a.number, a.tokens[1].column, "alphabet must be non-empty");
        doc.alphabet = alphabet_;
        const Line& d = expect_keyword("depth", 1);
        depth_ = static_cast<int>(parse_number(d.tokens[1], d.number, kMaxDepth, "depth"));
        if (depth_ < 2 || depth_ % 2 != 0)
            throw ParseError(d.number, d.tokens[1].column, "depth bound must be even and at least 2");
    }

    void nodes(GameDocument&) {
        expect_keyword("NODES", 0);
        const std::size_t cap = UnravelLimits::from_environment().node_max;
        while (!done() && !at_keyword("TABOOS") && !at_keyword("PAYOFF")) {
            const Line& l = take();
            if (l.tokens.size() != 1) throw ParseError(l.number, l.tokens[1].column, "one position per line");
            Position p = parse_path(l.tokens[0], l.number, alphabet_);
            if (static_cast<int>(p.size()) > depth_)
                throw ParseError(l.number, l.tokens[0].column, "position deeper than the depth bound");
            if (!node_line_.emplace(std::move(p), l.number).second)
                throw ParseError(l.number, l.tokens[0].column, "duplicate position");
            if (node_line_.size() > cap) throw ParseError(l.number, 1, "too many positions");
        }
        if (!node_line_.count(Position{})) fail_eof_or_here("root position '.' is missing");
        for (const auto& [p, line] : node_line_) {
            if (p.empty()) continue;
            const Position parent(p.begin(), p.end() - 1);
            if (!node_line_.count(parent))
                throw ParseError(line, 1, "prefix closure: parent of " + format_position(p) + " is not listed");
        }
    }

    void fail_eof_or_here(const std::string& what) const {
        if (done()) fail_eof(what);
        fail_at(peek(), what);
    }

    void taboos() {
        if (!at_keyword("TABOOS")) return;
        expect_keyword("TABOOS", 0);
        while (!done() && !at_keyword("PAYOFF")) {
            const Line& l = take();
            if (l.tokens.size() != 2) {
                const Token& bad = l.tokens.size() > 2 ? l.tokens[2] : l.tokens[0];
                throw ParseError(l.number, bad.column, "expected: position I|II");
            }
            const Position p = parse_path(l.tokens[0], l.number, alphabet_);
            Player loser;
            if (l.tokens[1].text == "I")
                loser = Player::I;
            else if (l.tokens[1].text == "II")
                loser = Player::II;
            else
                throw ParseError(l.number, l.tokens[1].column, "expected I or II");
            if (!node_line_.count(p)) throw ParseError(l.number, l.tokens[0].column, "taboo on an unlisted position");
            if (static_cast<int>(p.size()) == depth_)
                throw ParseError(l.number, l.tokens[0].column, "taboo at full depth");
            if (!taboo_.emplace(p, std::make_pair(loser, l.number)).second)
                throw ParseError(l.number, l.tokens[0].column, "duplicate taboo");
        }
    }

    ClosedSpec generators() {
        ClosedSpec spec;
        while (at_keyword("gen")) {
            const Line& l = expect_keyword("gen", 1);
            Position p = parse_path(l.tokens[1], l.number, alphabet_);
            if (!node_line_.count(p))
                throw ParseError(l.number, l.tokens[1].column, "generator is not a position of the tree");
            if (p.empty() || static_cast<int>(p.size()) >= depth_)
                throw ParseError(l.number, l.tokens[1].column, "generator must lie strictly between root and depth bound");
            generator_lines_.emplace_back(p, l.number);
            spec.generators.push_back(std::move(p));
        }
        return spec;
    }

    void payoff(GameDocument& doc) {
        const Line& l = expect_keyword("PAYOFF", 1);
        const std::string_view kind = l.tokens[1].text;
        if (kind == "closed") {
            doc.payoff = generators();
        } else if (kind == "open") {
            doc.payoff = OpenSpec{generators()};
        } else if (kind == "union") {
            UnionSpec u;
            while (at_keyword("part")) {
                expect_keyword("part", 0);
                u.parts.push_back(generators());
            }
            if (u.parts.empty()) fail_eof_or_here("union needs at least one part");
            doc.payoff = std::move(u);
        } else {
            throw ParseError(l.number, l.tokens[1].column, "payoff kind must be closed, open or union");
        }
    }

    void build(GameDocument& doc) {
        // Terminal status is only known once all positions are in.
        std::map<Position, bool> inner;
        for (const auto& [p, line] : node_line_)
            if (!p.empty()) inner[Position(p.begin(), p.end() - 1)] = true;
        for (const auto& [p, tag] : taboo_)
            if (inner.count(p)) throw ParseError(tag.second, 1, "taboo on non-terminal position " + format_position(p));
        for (const auto& [p, line] : node_line_)
            if (!inner.count(p) && static_cast<int>(p.size()) < depth_ && !taboo_.count(p))
                throw ParseError(line, 1, "early terminal without taboo tag: " + format_position(p));
        for (const auto& [p, line] : generator_lines_)
            if (!inner.count(p)) throw ParseError(line, 1, "generator is terminal: " + format_position(p));

        GameTreeBuilder b(depth_);
        for (const auto& [p, line] : node_line_) {
            const NodeId v = b.add_position(p);
            if (auto it = taboo_.find(p); it != taboo_.end()) b.set_taboo(v, it->second.first);
        }
        try {
            doc.tree = b.build();
        } catch (const InvalidInput& e) {
            throw ParseError(1, 1, e.what());
        }
    }
};

void print_generators(std::ostringstream& out, const ClosedSpec& spec) {
    std::vector<Position> gens = spec.generators;
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    for (const auto& g : gens) out << "gen " << format_position(g) << '\n';
}

}  // namespace

Position parse_position(std::string_view text) {
    return parse_path(Token{text, 1}, 1, std::numeric_limits<MoveLabel>::max());
}

GameDocument parse_game(std::string_view text) { return Parser(text).run(); }

GameDocument read_game_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_game(buf.str());
}

std::string print_game(const GameDocument& doc) {
    const GameTree& t = doc.tree;
    std::ostringstream out;
    out << "GAME v" << doc.version << '\n';
    out << "alphabet " << doc.alphabet << '\n';
    out << "depth " << t.depth_bound() << '\n';
    out << "NODES\n";
    for (std::size_t i = 0; i < t.size(); ++i) out << format_position(t.position(static_cast<NodeId>(i))) << '\n';
    bool any_taboo = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (!t.taboo(v)) continue;
        if (!any_taboo) out << "TABOOS\n";
        any_taboo = true;
        out << format_position(t.position(v)) << ' ' << to_string(*t.taboo(v)) << '\n';
    }
    std::visit(
        [&](const auto& spec) {
            using S = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<S, ClosedSpec>) {
                out << "PAYOFF closed\n";
                print_generators(out, spec);
            } else if constexpr (std::is_same_v<S, OpenSpec>) {
                out << "PAYOFF open\n";
                print_generators(out, spec.complement);
            } else {
                out << "PAYOFF union\n";
                for (const auto& part : spec.parts) {
                    out << "part\n";
                    print_generators(out, part);
                }
            }
        },
        doc.payoff);
    return out.str();
}

}  // namespace unravel
