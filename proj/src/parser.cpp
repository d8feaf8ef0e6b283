#include "epostar/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <vector>

namespace epostar {

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Token {
    enum class Kind { LParen, RParen, Comma, Arrow, Ident, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Token::Kind::End, "", line, col};
        char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::Kind::LParen, "(", line, col};
        }
        if (c == ')') {
            advance();
            return {Token::Kind::RParen, ")", line, col};
        }
        if (c == ',') {
            advance();
            return {Token::Kind::Comma, ",", line, col};
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            return {Token::Kind::Arrow, "->", line, col};
        }
        if (ident_char(c)) {
            std::string ident;
            while (pos_ < text_.size() && ident_char(text_[pos_])) {
                ident += text_[pos_];
                advance();
            }
            return {Token::Kind::Ident, ident, line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

    // Raw text until the paren that closes the current (COMMENT ... block.
    void skip_balanced() {
        int depth = 1;
        while (pos_ < text_.size() && depth > 0) {
            char c = text_[pos_];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (depth > 0) advance();
        }
        if (depth > 0) throw ParseError("unterminated comment", line_, col_);
        advance();  // closing ')'
    }

    int line() const { return line_; }
    int col() const { return col_; }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Terms before symbol/variable resolution.
struct RawTerm {
    std::string name;
    bool applied = false;  // written with parentheses
    std::vector<RawTerm> args;
    int line = 0;
    int col = 0;
};

struct RawRule {
    RawTerm lhs;
    RawTerm rhs;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { look_ = lex_.next(); }

    void parse_file() {
        while (look_.kind != Token::Kind::End) {
            expect(Token::Kind::LParen, "'('");
            Token head = expect(Token::Kind::Ident, "declaration keyword");
            if (head.text == "VAR") {
                while (look_.kind == Token::Kind::Ident) {
                    vars_.insert(look_.text);
                    consume();
                }
                expect(Token::Kind::RParen, "')'");
            } else if (head.text == "RULES") {
                while (look_.kind != Token::Kind::RParen) {
                    RawRule rule;
                    rule.lhs = parse_raw_term();
                    expect(Token::Kind::Arrow, "'->'");
                    rule.rhs = parse_raw_term();
                    rules_.push_back(std::move(rule));
                }
                consume();
            } else if (head.text == "COMMENT") {
                lex_.skip_balanced();
                look_ = lex_.next();
            } else {
                throw ParseError("unknown declaration '" + head.text + "'", head.line, head.col);
            }
        }
    }

    Trs build() {
        Signature sig;
        std::map<std::string, std::pair<int, Token>> arities;  // name -> (arity, first use)

        auto record_arity = [&](const RawTerm& t) {
            Token where{Token::Kind::Ident, t.name, t.line, t.col};
            auto [it, inserted] = arities.emplace(t.name, std::make_pair(static_cast<int>(t.args.size()), where));
            if (!inserted && it->second.first != static_cast<int>(t.args.size()))
                throw ParseError("symbol '" + t.name + "' used with arities " +
                                     std::to_string(it->second.first) + " and " +
                                     std::to_string(t.args.size()),
                                 t.line, t.col);
        };
        auto walk = [&](const RawTerm& t, auto&& self) -> void {
            if (vars_.count(t.name)) {
                if (t.applied)
                    throw ParseError("variable '" + t.name + "' applied to arguments", t.line, t.col);
                return;
            }
            record_arity(t);
            for (const RawTerm& a : t.args) self(a, self);
        };
        for (const RawRule& r : rules_) {
            walk(r.lhs, walk);
            walk(r.rhs, walk);
        }

        // A symbol is defined exactly when it roots some lhs.
        std::set<std::string> defined;
        for (const RawRule& r : rules_) {
            if (vars_.count(r.lhs.name))
                throw ParseError("left-hand side is a variable", r.lhs.line, r.lhs.col);
            defined.insert(r.lhs.name);
        }
        for (const auto& [name, info] : arities)
            sig.add(name, info.first,
                    defined.count(name) ? SymbolKind::Defined : SymbolKind::Constructor);

        std::vector<Rule> rules;
        for (const RawRule& r : rules_) {
            Term lhs = resolve(r.lhs, sig);
            Term rhs = resolve(r.rhs, sig);
            std::set<std::string> lhs_vars;
            for (const std::string& v : lhs.vars()) lhs_vars.insert(v);
            for (const std::string& v : rhs.vars())
                if (!lhs_vars.count(v))
                    throw ParseError("fresh variable '" + v + "' on right-hand side", r.rhs.line,
                                     r.rhs.col);
            rules.push_back(Rule{std::move(lhs), std::move(rhs)});
        }
        return Trs(std::move(sig), std::move(rules));
    }

private:
    RawTerm parse_raw_term() {
        Token head = expect(Token::Kind::Ident, "identifier");
        RawTerm t;
        t.name = head.text;
        t.line = head.line;
        t.col = head.col;
        if (look_.kind == Token::Kind::LParen) {
            t.applied = true;
            consume();
            if (look_.kind != Token::Kind::RParen) {
                t.args.push_back(parse_raw_term());
                while (look_.kind == Token::Kind::Comma) {
                    consume();
                    t.args.push_back(parse_raw_term());
                }
            }
            expect(Token::Kind::RParen, "')'");
        }
        return t;
    }

    Term resolve(const RawTerm& t, const Signature& sig) {
        if (vars_.count(t.name)) return Term::var(t.name);
        std::vector<Term> args;
        args.reserve(t.args.size());
        for (const RawTerm& a : t.args) args.push_back(resolve(a, sig));
        return Term::app(sig.require(t.name), std::move(args));
    }

    Token expect(Token::Kind kind, const std::string& what) {
        if (look_.kind != kind)
            throw ParseError("expected " + what +
                                 (look_.text.empty() ? "" : ", found '" + look_.text + "'"),
                             look_.line, look_.col);
        Token t = look_;
        consume();
        return t;
    }
    void consume() { look_ = lex_.next(); }

    Lexer lex_;
    Token look_;
    std::set<std::string> vars_;
    std::vector<RawRule> rules_;
};

}  // namespace

Trs parse_trs(const std::string& text) {
    Parser p(text);
    p.parse_file();
    return p.build();
}

Term parse_term(const std::string& text, const Signature& sig, const std::set<std::string>& vars) {
    Lexer lex(text);
    // Small recursive-descent over the same token stream.
    struct Helper {
        Lexer& lex;
        Token look;
        const Signature& sig;
        const std::set<std::string>& vars;

        Token expect(Token::Kind kind, const std::string& what) {
            if (look.kind != kind) throw ParseError("expected " + what, look.line, look.col);
            Token t = look;
            look = lex.next();
            return t;
        }
        Term term() {
            Token head = expect(Token::Kind::Ident, "identifier");
            if (vars.count(head.text)) return Term::var(head.text);
            std::vector<Term> args;
            if (look.kind == Token::Kind::LParen) {
                look = lex.next();
                if (look.kind != Token::Kind::RParen) {
                    args.push_back(term());
                    while (look.kind == Token::Kind::Comma) {
                        look = lex.next();
                        args.push_back(term());
                    }
                }
                expect(Token::Kind::RParen, "')'");
            }
            auto id = sig.find(head.text);
            if (!id) throw ParseError("unknown symbol '" + head.text + "'", head.line, head.col);
            if (sig[*id].arity != static_cast<int>(args.size()))
                throw ParseError("symbol '" + head.text + "' expects " +
                                     std::to_string(sig[*id].arity) + " arguments",
                                 head.line, head.col);
            return Term::app(*id, std::move(args));
        }
    };
    Helper h{lex, lex.next(), sig, vars};
    Term t = h.term();
    if (h.look.kind != Token::Kind::End)
        throw ParseError("trailing input after term", h.look.line, h.look.col);
    return t;
}

}  // namespace epostar
