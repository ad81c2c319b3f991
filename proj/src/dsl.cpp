#include "crn/dsl.hpp"

#include <cctype>
#include <optional>

namespace crn {

namespace {

enum class Tok { Name, Int, Arrow, RevArrow, Plus, Colon, Sep, End };

struct Token {
    Tok kind;
    std::string text;
    long long value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        skip_blank();
        Token t;
        t.line = line_;
        t.col = col_;
        if (eof()) {
            t.kind = Tok::End;
            return t;
        }
        char c = s_[pos_];
        if (c == '\n' || c == ',') {
            advance();
            t.kind = Tok::Sep;
            t.text = c == ',' ? "," : "\\n";
            return t;
        }
        if (c == '+') {
            advance();
            t.kind = Tok::Plus;
            return t;
        }
        if (c == ':') {
            advance();
            t.kind = Tok::Colon;
            return t;
        }
        if (c == '<') {
            if (pos_ + 2 < s_.size() && s_[pos_ + 1] == '-' && s_[pos_ + 2] == '>') {
                advance();
                advance();
                advance();
                t.kind = Tok::RevArrow;
                return t;
            }
            throw ParseError(t.line, t.col, "expected '<->'");
        }
        if (c == '-') {
            if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
                advance();
                advance();
                t.kind = Tok::Arrow;
                return t;
            }
            if (pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                advance();
                Token num = lex_int(t.line, t.col);
                num.value = -num.value;
                throw ParseError(t.line, t.col, "negative stoichiometry");
            }
            throw ParseError(t.line, t.col, "stray '-'");
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_int(t.line, t.col);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_name(t.line, t.col);
        throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
    }

  private:
    bool eof() const { return pos_ >= s_.size(); }

    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (!eof() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) advance();
    }

    Token lex_int(int line, int col) {
        Token t;
        t.kind = Tok::Int;
        t.line = line;
        t.col = col;
        long long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1'000'000'000LL) throw ParseError(line, col, "stoichiometry too large");
            t.text.push_back(s_[pos_]);
            advance();
        }
        if (!eof() && s_[pos_] == '.')
            throw ParseError(line, col, "non-integer stoichiometry");
        t.value = v;
        return t;
    }

    Token lex_name(int line, int col) {
        Token t;
        t.kind = Tok::Name;
        t.line = line;
        t.col = col;
        while (!eof()) {
            char c = s_[pos_];
            bool name_char = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
            // '-' continues a name only when not opening an arrow.
            if (c == '-' && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '>')) name_char = true;
            if (!name_char) break;
            t.text.push_back(c);
            advance();
        }
        return t;
    }

    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) { shift(); }

    ReactionNetwork parse() {
        parse_header();
        skip_seps();
        while (cur_.kind != Tok::End) {
            parse_statement();
            if (cur_.kind == Tok::Sep) {
                skip_seps();
            } else if (cur_.kind != Tok::End) {
                throw ParseError(cur_.line, cur_.col, "expected ',' or newline between statements");
            }
        }
        return net_;
    }

    Complex parse_single_complex(bool allow_new, ReactionNetwork& net) {
        net_ = net;
        allow_new_in_complex_ = allow_new;
        skip_seps();
        Complex c = parse_complex();
        if (cur_.kind != Tok::End)
            throw ParseError(cur_.line, cur_.col, "trailing input after complex");
        net = net_;
        return c;
    }

  private:
    void shift() { cur_ = lex_.next(); }

    void skip_seps() {
        while (cur_.kind == Tok::Sep) shift();
    }

    void parse_header() {
        skip_seps();
        if (cur_.kind != Tok::Name || cur_.text != "species") return;
        // Look ahead: "species" is only a header when followed by ':'.
        Lexer probe = lex_;
        Token after = probe.next();
        if (after.kind != Tok::Colon) return;
        shift();  // now at ':'
        shift();
        int hline = cur_.line;
        bool any = false;
        while (cur_.kind == Tok::Name && cur_.line == hline) {
            add_species_checked(cur_);
            any = true;
            shift();
        }
        if (!any) throw ParseError(cur_.line, cur_.col, "empty species header");
    }

    void add_species_checked(const Token& t) {
        if (net_.species_index(t.text) >= 0)
            throw ParseError(t.line, t.col, "duplicate species name: " + t.text);
        net_.species.push_back(t.text);
    }

    int species_for(const Token& t, bool allow_new) {
        int idx = net_.species_index(t.text);
        if (idx >= 0) return idx;
        if (!allow_new) throw ParseError(t.line, t.col, "unknown species: " + t.text);
        net_.species.push_back(t.text);
        return net_.species_count() - 1;
    }

    Complex parse_complex() {
        Complex c;
        if (cur_.kind == Tok::Int && cur_.value == 0) {
            Token zero = cur_;
            shift();
            if (cur_.kind == Tok::Name) {
                // "0X": a zero-coefficient term, contributing nothing.
                species_for(cur_, allow_new_in_complex_);
                shift();
                parse_more_terms(c);
                return c;
            }
            (void)zero;
            return c;  // the empty complex
        }
        parse_term(c);
        parse_more_terms(c);
        return c;
    }

    void parse_more_terms(Complex& c) {
        while (cur_.kind == Tok::Plus) {
            shift();
            parse_term(c);
        }
    }

    void parse_term(Complex& c) {
        long long coeff = 1;
        if (cur_.kind == Tok::Int) {
            coeff = cur_.value;
            shift();
        }
        if (cur_.kind != Tok::Name)
            throw ParseError(cur_.line, cur_.col, "expected species name");
        int idx = species_for(cur_, allow_new_in_complex_);
        shift();
        if (coeff > 0) c.add(idx, coeff);
    }

    void parse_statement() {
        allow_new_in_complex_ = true;
        Complex left = parse_complex();
        if (cur_.kind != Tok::Arrow && cur_.kind != Tok::RevArrow)
            throw ParseError(cur_.line, cur_.col, "expected '->' or '<->'");
        while (cur_.kind == Tok::Arrow || cur_.kind == Tok::RevArrow) {
            bool rev = cur_.kind == Tok::RevArrow;
            shift();
            Complex right = parse_complex();
            net_.reactions.push_back({left, right});
            if (rev) net_.reactions.push_back({right, left});
            left = right;
        }
    }

    Lexer lex_;
    Token cur_;
    ReactionNetwork net_;
    bool allow_new_in_complex_ = true;
};

}  // namespace

ReactionNetwork parse_network(const std::string& text) { return Parser(text).parse(); }

Complex parse_complex(const std::string& text, ReactionNetwork& net, bool allow_new_species) {
    return Parser(text).parse_single_complex(allow_new_species, net);
}

std::string render_complex(const ReactionNetwork& net, const Complex& c) {
    if (c.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [s, coeff] : c.coeff) {
        if (!first) out += " + ";
        first = false;
        if (coeff != 1) out += std::to_string(coeff);
        out += net.species.at(static_cast<size_t>(s));
    }
    return out;
}

std::string render_network(const ReactionNetwork& net) {
    // First-mention order of the rendered reactions.
    std::vector<int> mention;
    std::vector<bool> seen(net.species.size(), false);
    for (const Reaction& r : net.reactions) {
        for (const auto& [s, c] : r.source.coeff)
            if (!seen[s]) {
                seen[s] = true;
                mention.push_back(s);
            }
        for (const auto& [s, c] : r.target.coeff)
            if (!seen[s]) {
                seen[s] = true;
                mention.push_back(s);
            }
    }
    bool need_header = static_cast<int>(mention.size()) != net.species_count();
    for (size_t i = 0; i < mention.size() && !need_header; ++i)
        if (mention[i] != static_cast<int>(i)) need_header = true;

    std::string out;
    if (need_header && !net.species.empty()) {
        out += "species:";
        for (const auto& s : net.species) out += " " + s;
        if (!net.reactions.empty()) out += "\n";
    }
    for (size_t j = 0; j < net.reactions.size(); ++j) {
        if (j) out += "\n";
        out += render_complex(net, net.reactions[j].source);
        out += " -> ";
        out += render_complex(net, net.reactions[j].target);
    }
    return out;
}

}  // namespace crn
