#include <alsp/parser.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace alsp {

namespace {

std::string render(const std::string& message, const std::string& origin, std::size_t line, std::size_t column,
                   const std::string& snippet) {
    std::string out = (origin.empty() ? std::string("<input>") : origin) + ':' + std::to_string(line) + ':' +
                      std::to_string(column) + ": " + message;
    if (!snippet.empty()) {
        out += "\n  " + snippet + "\n  " + std::string(column > 0 ? column - 1 : 0, ' ') + '^';
    }
    return out;
}

} // namespace

ParseError::ParseError(std::string msg, std::string org, std::size_t ln, std::size_t col, std::string snip)
    : Error(render(msg, org, ln, col, snip)),
      message(std::move(msg)),
      origin(std::move(org)),
      line(ln),
      column(col),
      snippet(std::move(snip)) {}

namespace {

enum class Tok { ident, variable, lparen, rparen, comma, dot, if_, equals, not_, end };

const char* describe(Tok t) {
    switch (t) {
        case Tok::ident:    return "identifier";
        case Tok::variable: return "variable";
        case Tok::lparen:   return "'('";
        case Tok::rparen:   return "')'";
        case Tok::comma:    return "','";
        case Tok::dot:      return "'.'";
        case Tok::if_:      return "':-'";
        case Tok::equals:   return "'='";
        case Tok::not_:     return "'not'";
        case Tok::end:      return "end of input";
    }
    return "token";
}

struct Token {
    Tok         kind = Tok::end;
    std::string text;
    std::size_t offset = 0;
    std::size_t line   = 1;
    std::size_t column = 1;
};

bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

class Parser {
public:
    explicit Parser(const SourceSpec& src) : src_(src), text_(src.text) {
        for (std::size_t i = 0; i + 1 < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++last_line_;
                last_col_ = 1;
            } else {
                ++last_col_;
            }
        }
        advance();
    }

    Program parse() {
        Program p;
        while (tok_.kind != Tok::end) p.add(statement());
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& message, std::size_t offset, std::size_t line, std::size_t column) const {
        std::size_t begin = 0;
        if (offset > 0) {
            auto nl = text_.rfind('\n', offset - 1);
            begin   = nl == std::string::npos ? 0 : nl + 1;
        }
        std::size_t end = text_.find('\n', begin);
        std::string snippet = text_.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
        throw ParseError(message, src_.origin, line, column, snippet);
    }

    [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
        fail(message, t.offset, t.line, t.column);
    }

    [[noreturn]] void expected(const std::string& what) const {
        std::string found = describe(tok_.kind);
        if (!tok_.text.empty()) found += " '" + tok_.text + "'";
        fail_at(tok_, "expected " + what + ", found " + found);
    }

    void bump(std::size_t n = 1) {
        for (; n > 0 && pos_ < text_.size(); --n, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else {
                break;
            }
        }
        tok_        = Token{};
        tok_.offset = pos_;
        tok_.line   = line_;
        tok_.column = col_;
        if (pos_ >= text_.size()) {
            tok_.kind = Tok::end;
            // point at the last byte so the position stays inside the source
            if (!text_.empty()) {
                tok_.offset = text_.size() - 1;
                tok_.line   = last_line_;
                tok_.column = last_col_;
            }
            return;
        }
        char c = text_[pos_];
        auto single = [&](Tok k) {
            tok_.kind = k;
            tok_.text = std::string(1, c);
            bump();
        };
        if (c >= 'a' && c <= 'z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) bump();
            tok_.text = text_.substr(start, pos_ - start);
            tok_.kind = tok_.text == "not" ? Tok::not_ : Tok::ident;
        } else if (c >= 'A' && c <= 'Z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) bump();
            tok_.text = text_.substr(start, pos_ - start);
            tok_.kind = Tok::variable;
        } else if (c == '(') {
            single(Tok::lparen);
        } else if (c == ')') {
            single(Tok::rparen);
        } else if (c == ',') {
            single(Tok::comma);
        } else if (c == '.') {
            single(Tok::dot);
        } else if (c == '=') {
            single(Tok::equals);
        } else if (c == ':') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                tok_.kind = Tok::if_;
                tok_.text = ":-";
                bump(2);
            } else {
                fail(pos_ + 1 < text_.size() ? "expected ':-'" : "expected ':-', found end of input", pos_, line_, col_);
            }
        } else {
            std::string shown = static_cast<unsigned char>(c) < 0x80 ? std::string(1, c) : "non-ASCII byte";
            fail("unexpected character '" + shown + "'", pos_, line_, col_);
        }
    }

    Token take(Tok kind, const std::string& what) {
        if (tok_.kind != kind) expected(what);
        Token t = tok_;
        advance();
        return t;
    }

    Rule statement() {
        Rule r;
        r.location = {src_.origin, tok_.line, tok_.column};
        if (tok_.kind == Tok::if_) {
            advance();
            r.body = body();
            take(Tok::dot, "'.' or ',' in constraint body");
            return r;
        }
        if (tok_.kind != Tok::ident) expected("rule head (predicate name) or ':-'");
        r.head = atom();
        if (tok_.kind == Tok::equals) fail_at(tok_, "built-in equality may appear only in rule bodies");
        if (tok_.kind == Tok::dot) {
            advance();
            return r;
        }
        if (tok_.kind != Tok::if_) expected("'.' or ':-' after rule head");
        advance();
        r.body = body();
        if (tok_.kind != Tok::dot) expected("',' or '.' after body literal");
        advance();
        return r;
    }

    std::vector<Literal> body() {
        std::vector<Literal> out;
        out.push_back(literal());
        while (tok_.kind == Tok::comma) {
            advance();
            out.push_back(literal());
        }
        return out;
    }

    Literal literal() {
        if (tok_.kind == Tok::not_) {
            advance();
            if (tok_.kind != Tok::ident) expected("atom after 'not'");
            return Literal::naf(atom());
        }
        if (tok_.kind != Tok::ident && tok_.kind != Tok::variable) {
            expected("literal (atom, 'not' atom, or equality)");
        }
        Token start = tok_;
        Term  lhs   = term();
        if (tok_.kind == Tok::equals) {
            advance();
            if (tok_.kind != Tok::ident && tok_.kind != Tok::variable) expected("term after '='");
            Term rhs = term();
            return Literal::pos(Atom::equality(std::move(lhs), std::move(rhs)));
        }
        if (lhs.is_variable()) expected("'=' after variable '" + lhs.name() + "'");
        Atom a(lhs.name(), lhs.args());
        note_arity(a, start);
        return Literal::pos(std::move(a));
    }

    Atom atom() {
        Token start = tok_;
        Atom  a;
        a.predicate = take(Tok::ident, "predicate name").text;
        if (tok_.kind == Tok::lparen) a.args = arguments();
        note_arity(a, start);
        return a;
    }

    std::vector<Term> arguments() {
        take(Tok::lparen, "'('");
        std::vector<Term> args;
        if (tok_.kind != Tok::ident && tok_.kind != Tok::variable) expected("term");
        args.push_back(term());
        while (tok_.kind == Tok::comma) {
            advance();
            if (tok_.kind != Tok::ident && tok_.kind != Tok::variable) expected("term");
            args.push_back(term());
        }
        if (tok_.kind != Tok::rparen) expected("',' or ')' in argument list");
        advance();
        return args;
    }

    Term term() {
        if (tok_.kind == Tok::variable) {
            auto name = tok_.text;
            advance();
            return Term::variable(std::move(name));
        }
        auto name = take(Tok::ident, "term").text;
        if (tok_.kind == Tok::lparen) return Term::compound(std::move(name), arguments());
        return Term::constant(std::move(name));
    }

    void note_arity(const Atom& a, const Token& at) {
        auto [it, inserted] = arities_.try_emplace(a.predicate, a.arity(), at);
        if (!inserted && it->second.first != a.arity()) {
            const Token& first = it->second.second;
            fail_at(at, "predicate '" + a.predicate + "' used with arity " + std::to_string(a.arity()) +
                            ", but with arity " + std::to_string(it->second.first) + " at line " +
                            std::to_string(first.line) + ", column " + std::to_string(first.column));
        }
    }

    const SourceSpec&  src_;
    const std::string& text_;
    std::size_t        pos_  = 0;
    std::size_t        line_ = 1;
    std::size_t        col_  = 1;
    std::size_t        last_line_ = 1; // position of the final byte
    std::size_t        last_col_  = 1;
    Token              tok_;
    std::map<std::string, std::pair<std::size_t, Token>> arities_;
};

} // namespace

Program parse_program(const SourceSpec& src) { return Parser(src).parse(); }

std::string format_program(const Program& p) {
    std::string out;
    for (const auto& r : p.rules) {
        out += to_string(r);
        out += '\n';
    }
    return out;
}

Atom parse_ground_atom(std::string_view text, std::string origin) {
    std::string src(text);
    Program     p = parse_program({src + ".", origin});
    if (p.rules.size() != 1 || !p.rules[0].is_fact()) {
        throw ParseError("expected a single atom", origin, 1, 1, src);
    }
    if (!p.rules[0].head->is_ground()) {
        throw ParseError("atom must be ground", origin, 1, 1, src);
    }
    return *p.rules[0].head;
}

Program parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_program({buf.str(), path});
}

} // namespace alsp
