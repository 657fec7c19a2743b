#include "bltab/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <utility>

namespace bltab {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

bool valid_atom_name(const std::string& name) {
    if (name.empty()) return false;
    if (name[0] < 'a' || name[0] > 'z') return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace

Formula::Formula(Conn k, std::string name, FormulaPtr l, FormulaPtr r)
    : kind_(k), name_(std::move(name)), lhs_(std::move(l)), rhs_(std::move(r)) {
    std::size_t h = static_cast<std::size_t>(kind_) + 1;
    h = mix(h, std::hash<std::string>{}(name_));
    if (lhs_) h = mix(h, lhs_->hash_);
    if (rhs_) h = mix(h, rhs_->hash_);
    hash_ = h;
}

FormulaPtr Formula::atom(const std::string& name) {
    if (!valid_atom_name(name))
        throw std::invalid_argument("invalid atom name: '" + name + "'");
    return FormulaPtr(new Formula(Conn::Atom, name, nullptr, nullptr));
}
FormulaPtr Formula::falsum() { return FormulaPtr(new Formula(Conn::Falsum, "", nullptr, nullptr)); }
FormulaPtr Formula::verum() { return FormulaPtr(new Formula(Conn::Verum, "", nullptr, nullptr)); }
FormulaPtr Formula::strong(FormulaPtr l, FormulaPtr r) {
    return FormulaPtr(new Formula(Conn::Strong, "", std::move(l), std::move(r)));
}
FormulaPtr Formula::impl(FormulaPtr l, FormulaPtr r) {
    return FormulaPtr(new Formula(Conn::Impl, "", std::move(l), std::move(r)));
}
FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
    return FormulaPtr(new Formula(Conn::Or, "", std::move(l), std::move(r)));
}
FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
    return FormulaPtr(new Formula(Conn::And, "", std::move(l), std::move(r)));
}
FormulaPtr Formula::delta(FormulaPtr f) {
    return FormulaPtr(new Formula(Conn::Delta, "", std::move(f), nullptr));
}
FormulaPtr Formula::inv(FormulaPtr f) {
    return FormulaPtr(new Formula(Conn::Inv, "", std::move(f), nullptr));
}

bool Formula::equals(const Formula& other) const {
    if (this == &other) return true;
    if (hash_ != other.hash_ || kind_ != other.kind_) return false;
    if (name_ != other.name_) return false;
    if (!formula_eq(lhs_, other.lhs_)) return false;
    return formula_eq(rhs_, other.rhs_);
}

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->equals(*b);
}

void Formula::atoms(std::vector<std::string>& out) const {
    if (kind_ == Conn::Atom) {
        if (std::find(out.begin(), out.end(), name_) == out.end()) out.push_back(name_);
        return;
    }
    if (lhs_) lhs_->atoms(out);
    if (rhs_) rhs_->atoms(out);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Zero, One, Amp, Impl, Or, And, Tilde, Delta, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
        std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            current_ = {Tok::End, "", start};
            return;
        }
        char c = text_[pos_];
        switch (c) {
            case '&': pos_++; current_ = {Tok::Amp, "&", start}; return;
            case '~': pos_++; current_ = {Tok::Tilde, "~", start}; return;
            case '(': pos_++; current_ = {Tok::LParen, "(", start}; return;
            case ')': pos_++; current_ = {Tok::RParen, ")", start}; return;
            case '0': pos_++; current_ = {Tok::Zero, "0", start}; return;
            case '1': pos_++; current_ = {Tok::One, "1", start}; return;
            case '-':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                    pos_ += 2;
                    current_ = {Tok::Impl, "->", start};
                    return;
                }
                throw ParseError("expected '->'", start);
            case '\\':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                    pos_ += 2;
                    current_ = {Tok::Or, "\\/", start};
                    return;
                }
                throw ParseError("expected '\\/'", start);
            case '/':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\\') {
                    pos_ += 2;
                    current_ = {Tok::And, "/\\", start};
                    return;
                }
                throw ParseError("expected '/\\'", start);
            default: break;
        }
        if (c == 'D') {
            // Reserved: the crispness operator. Identifiers start with a
            // lowercase letter, so "Dp" reads as the operator applied to p.
            pos_++;
            current_ = {Tok::Delta, "D", start};
            return;
        }
        if (c >= 'a' && c <= 'z') {
            std::size_t end = pos_ + 1;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                end++;
            std::string ident = text_.substr(pos_, end - pos_);
            pos_ = end;
            current_ = {Tok::Ident, ident, start};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    Token current_{Tok::End, "", 0};
};

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaPtr parse() {
        FormulaPtr f = impl();
        if (lex_.peek().kind != Tok::End)
            throw ParseError("unexpected trailing input '" + lex_.peek().text + "'",
                             lex_.peek().pos);
        return f;
    }

  private:
    FormulaPtr impl() {
        FormulaPtr left = disj();
        if (lex_.peek().kind == Tok::Impl) {
            lex_.take();
            return Formula::impl(std::move(left), impl());  // right-associative
        }
        return left;
    }

    FormulaPtr disj() {
        FormulaPtr f = conj();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            f = Formula::disj(std::move(f), conj());
        }
        return f;
    }

    FormulaPtr conj() {
        FormulaPtr f = strong();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            f = Formula::conj(std::move(f), strong());
        }
        return f;
    }

    FormulaPtr strong() {
        FormulaPtr f = unary();
        while (lex_.peek().kind == Tok::Amp) {
            lex_.take();
            f = Formula::strong(std::move(f), unary());
        }
        return f;
    }

    FormulaPtr unary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Tilde: return Formula::inv(unary());
            case Tok::Delta: return Formula::delta(unary());
            case Tok::Ident: return Formula::atom(t.text);
            case Tok::Zero: return Formula::falsum();
            case Tok::One: return Formula::verum();
            case Tok::LParen: {
                FormulaPtr f = impl();
                Token close = lex_.take();
                if (close.kind != Tok::RParen) throw ParseError("expected ')'", close.pos);
                return f;
            }
            case Tok::End: throw ParseError("unexpected end of input", t.pos);
            default: throw ParseError("unexpected token '" + t.text + "'", t.pos);
        }
    }

    Lexer lex_;
};

// Binding strength, loosest first. Unary operators bind tightest.
int precedence(Conn k) {
    switch (k) {
        case Conn::Impl: return 1;
        case Conn::Or: return 2;
        case Conn::And: return 3;
        case Conn::Strong: return 4;
        case Conn::Delta:
        case Conn::Inv: return 5;
        default: return 6;
    }
}

void render(const FormulaPtr& f, int parent_prec, std::string& out) {
    int prec = precedence(f->kind());
    bool parens = prec < parent_prec;
    if (parens) out += "(";
    switch (f->kind()) {
        case Conn::Atom: out += f->atom_name(); break;
        case Conn::Falsum: out += "0"; break;
        case Conn::Verum: out += "1"; break;
        case Conn::Impl:
            render(f->lhs(), prec + 1, out);  // left side must be a disj
            out += " -> ";
            render(f->rhs(), prec, out);
            break;
        case Conn::Or:
            render(f->lhs(), prec, out);
            out += " \\/ ";
            render(f->rhs(), prec + 1, out);
            break;
        case Conn::And:
            render(f->lhs(), prec, out);
            out += " /\\ ";
            render(f->rhs(), prec + 1, out);
            break;
        case Conn::Strong:
            render(f->lhs(), prec, out);
            out += " & ";
            render(f->rhs(), prec + 1, out);
            break;
        case Conn::Delta:
            out += "D ";
            render(f->lhs(), prec, out);
            break;
        case Conn::Inv:
            out += "~";
            render(f->lhs(), prec, out);
            break;
    }
    if (parens) out += ")";
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).parse(); }

std::string render_formula(const FormulaPtr& f) {
    std::string out;
    render(f, 0, out);
    return out;
}

}  // namespace bltab
