/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <optional>
#include <set>

namespace chr {

namespace {

enum class Tok {
    end,
    atom_name, // lowercase identifier (also `mod`, `is`, `constraints`)
    var_name,  // uppercase or `_` identifier
    integer,
    lparen,
    rparen,
    comma,
    dot,
    at,          // @
    pipe,        // |
    backslash,   // \ (head separator)
    simp_arrow,  // <=>
    prop_arrow,  // ==>
    prio_sep,    // ::
    slash,       // / (declarations only)
    op_sym,      // = == \== < =< > >= =:= =\= + - *
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { tokenize(); }
    const std::vector<Token>& tokens() const { return tokens_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

    void push(Tok kind, std::string text, std::int64_t value = 0) {
        tokens_.push_back({kind, std::move(text), value, tok_line_, tok_col_});
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    bool try_consume(const char* s) {
        std::size_t n = std::strlen(s);
        if (src_.compare(pos_, n, s) != 0) return false;
        for (std::size_t i = 0; i < n; ++i) advance();
        return true;
    }

    void tokenize() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (c == '%') {
                while (pos_ < src_.size() && peek() != '\n') advance();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            tok_line_ = line_;
            tok_col_ = col_;
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
                push(Tok::integer, num, std::stoll(num));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string name;
                while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                    name += advance();
                bool is_var = std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_';
                push(is_var ? Tok::var_name : Tok::atom_name, name);
                continue;
            }
            // multi-char punctuation, longest first
            if (try_consume("<=>")) { push(Tok::simp_arrow, "<=>"); continue; }
            if (try_consume("==>")) { push(Tok::prop_arrow, "==>"); continue; }
            if (try_consume("::")) { push(Tok::prio_sep, "::"); continue; }
            if (try_consume("=:=")) { push(Tok::op_sym, "=:="); continue; }
            if (try_consume("=\\=")) { push(Tok::op_sym, "=\\="); continue; }
            if (try_consume("\\==")) { push(Tok::op_sym, "\\=="); continue; }
            if (try_consume("==")) { push(Tok::op_sym, "=="); continue; }
            if (try_consume("=<")) { push(Tok::op_sym, "=<"); continue; }
            if (try_consume(">=")) { push(Tok::op_sym, ">="); continue; }
            switch (c) {
                case '(': advance(); push(Tok::lparen, "("); continue;
                case ')': advance(); push(Tok::rparen, ")"); continue;
                case ',': advance(); push(Tok::comma, ","); continue;
                case '.': advance(); push(Tok::dot, "."); continue;
                case '@': advance(); push(Tok::at, "@"); continue;
                case '|': advance(); push(Tok::pipe, "|"); continue;
                case '\\': advance(); push(Tok::backslash, "\\"); continue;
                case '/': advance(); push(Tok::slash, "/"); continue;
                case '=': advance(); push(Tok::op_sym, "="); continue;
                case '<': advance(); push(Tok::op_sym, "<"); continue;
                case '>': advance(); push(Tok::op_sym, ">"); continue;
                case '+': advance(); push(Tok::op_sym, "+"); continue;
                case '-': advance(); push(Tok::op_sym, "-"); continue;
                case '*': advance(); push(Tok::op_sym, "*"); continue;
                default: fail(std::string("unexpected character '") + c + "'");
            }
        }
        tok_line_ = line_;
        tok_col_ = col_;
        push(Tok::end, "");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    int tok_line_ = 1, tok_col_ = 1;
    std::vector<Token> tokens_;
};

// Binding powers, Prolog-style: comparisons 700 (non-assoc),
// + - 500 (left), * mod 400 (left).
int infix_level(const Token& t) {
    if (t.kind == Tok::op_sym) {
        if (t.text == "+" || t.text == "-") return 500;
        if (t.text == "*") return 400;
        return 700; // comparison / unification operators
    }
    if (t.kind == Tok::atom_name && (t.text == "mod")) return 400;
    if (t.kind == Tok::atom_name && (t.text == "is")) return 700;
    return 0;
}

// Variable scope used while building terms.
struct VarScope {
    bool rule_scoped = false;
    std::map<std::string, VarId> by_name;
    std::vector<std::string> names;       // rule-scoped allocation
    VarTable* runtime = nullptr;          // query allocation
    std::vector<VarId>* order = nullptr;  // first-occurrence order out-param

    Term make_var(const std::string& name) {
        auto it = by_name.find(name);
        if (it != by_name.end()) return Term::var(it->second, rule_scoped);
        VarId id;
        if (rule_scoped) {
            id = static_cast<VarId>(names.size());
            names.push_back(name);
        } else {
            id = runtime->intern(name);
            if (order) order->push_back(id);
        }
        by_name.emplace(name, id);
        return Term::var(id, rule_scoped);
    }
};

class Parser {
public:
    Parser(const std::string& src) : lexer_(src), toks_(lexer_.tokens()) {}

    Program parse_program() {
        std::vector<Rule> rules;
        std::set<SymbolArity> declared;
        std::set<std::string> names_seen;
        while (!at(Tok::end)) {
            if (try_declaration(declared)) continue;
            rules.push_back(parse_rule(rules.size(), names_seen));
        }
        return Program::build(std::move(rules), std::move(declared));
    }

    Query parse_query(VarTable& vars) {
        Query q;
        VarScope scope;
        scope.runtime = &vars;
        scope.order = &q.vars;
        if (at(Tok::end)) return q;
        q.atoms = parse_atom_list(scope);
        if (at(Tok::dot)) next();
        expect(Tok::end, "end of query");
        return q;
    }

private:
    const Token& cur() const { return toks_[idx_]; }
    bool at(Tok k) const { return cur().kind == k; }
    const Token& next() { return toks_[idx_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().line, cur().column, msg);
    }
    void expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        next();
    }

    // --- declarations -----------------------------------------------------

    bool try_declaration(std::set<SymbolArity>& declared) {
        if (!(at(Tok::atom_name) && cur().text == "constraints")) return false;
        std::size_t save = idx_;
        next();
        // must look like name/arity, else backtrack and treat as a rule
        if (!(at(Tok::atom_name) && toks_[idx_ + 1].kind == Tok::slash)) {
            idx_ = save;
            return false;
        }
        for (;;) {
            if (!at(Tok::atom_name)) fail("expected constraint symbol");
            std::string sym = next().text;
            expect(Tok::slash, "'/'");
            if (!at(Tok::integer)) fail("expected arity");
            auto ar = static_cast<std::uint32_t>(next().value);
            declared.insert({sym, ar});
            if (at(Tok::comma)) {
                next();
                continue;
            }
            expect(Tok::dot, "'.' after declaration");
            return true;
        }
    }

    // --- terms -------------------------------------------------------------

    Term parse_primary(VarScope& scope) {
        if (at(Tok::integer)) return Term::integer(next().value);
        if (at(Tok::op_sym) && cur().text == "-") {
            next();
            if (at(Tok::integer)) return Term::integer(-next().value);
            Term t = parse_primary(scope);
            return Term::compound("-", {t});
        }
        if (at(Tok::var_name)) return scope.make_var(next().text);
        if (at(Tok::lparen)) {
            next();
            Term t = parse_term(scope, 700);
            expect(Tok::rparen, "')'");
            return t;
        }
        if (at(Tok::atom_name)) {
            std::string name = next().text;
            if (at(Tok::lparen)) {
                next();
                std::vector<Term> args;
                args.push_back(parse_term(scope, 700));
                while (at(Tok::comma)) {
                    next();
                    args.push_back(parse_term(scope, 700));
                }
                expect(Tok::rparen, "')'");
                return Term::compound(name, std::move(args));
            }
            return Term::atom(name);
        }
        fail("expected a term");
    }

    Term parse_term(VarScope& scope, int max_level) {
        Term left = parse_primary(scope);
        for (;;) {
            int level = infix_level(cur());
            if (level == 0 || level > max_level) return left;
            std::string op = next().text;
            // comparisons are non-associative, arithmetic is left-associative
            int sub = level == 700 ? 699 : level - 1;
            Term right = parse_term(scope, sub);
            left = Term::compound(op, {left, right});
        }
    }

    ConstraintAtom to_constraint(const Term& t) {
        ConstraintAtom a;
        if (t.is_atom()) {
            a.symbol = t.name();
        } else if (t.is_compound()) {
            a.symbol = t.name();
            a.args = t.args();
        } else {
            fail("expected a constraint atom");
        }
        a.kind = is_builtin_symbol(a.symbol, a.args.size()) ? ConstraintAtom::Kind::builtin
                                                            : ConstraintAtom::Kind::chr;
        return a;
    }

    ConstraintAtom parse_constraint(VarScope& scope) {
        return to_constraint(parse_term(scope, 700));
    }

    std::vector<ConstraintAtom> parse_atom_list(VarScope& scope) {
        std::vector<ConstraintAtom> atoms;
        atoms.push_back(parse_constraint(scope));
        while (at(Tok::comma)) {
            next();
            atoms.push_back(parse_constraint(scope));
        }
        return atoms;
    }

    // --- rules -------------------------------------------------------------

    void collect_rule_vars(const Term& t, std::set<VarId>& out) {
        if (t.is_var()) {
            if (t.var_is_rule_scoped()) out.insert(t.var_id());
            return;
        }
        for (const Term& a : t.args()) collect_rule_vars(a, out);
    }

    Rule parse_rule(std::size_t rule_index, std::set<std::string>& names_seen) {
        Rule rule;
        VarScope scope;
        scope.rule_scoped = true;
        int rule_line = cur().line, rule_col = cur().column;

        // optional `name @`
        if (at(Tok::atom_name) && toks_[idx_ + 1].kind == Tok::at) {
            rule.name = next().text;
            next(); // @
        }

        // optional `priority ::` (tentative parse, backtracks)
        {
            std::size_t save = idx_;
            VarScope probe = scope;
            try {
                Term p = parse_term(probe, 700);
                if (at(Tok::prio_sep)) {
                    next();
                    scope = std::move(probe);
                    rule.priority = p;
                } else {
                    idx_ = save;
                }
            } catch (const ParseError&) {
                idx_ = save;
            }
        }

        std::vector<ConstraintAtom> heads1 = parse_atom_list(scope);
        std::vector<ConstraintAtom> heads2;
        bool simpagation = false;
        if (at(Tok::backslash)) {
            next();
            simpagation = true;
            heads2 = parse_atom_list(scope);
        }
        bool propagation;
        if (at(Tok::simp_arrow)) {
            propagation = false;
            next();
        } else if (at(Tok::prop_arrow)) {
            if (simpagation) fail("'\\' requires '<=>'");
            propagation = true;
            next();
        } else {
            fail("expected '<=>' or '==>'");
        }

        if (simpagation) {
            rule.kept = std::move(heads1);
            rule.removed = std::move(heads2);
        } else if (propagation) {
            rule.kept = std::move(heads1);
        } else {
            rule.removed = std::move(heads1);
        }

        std::vector<ConstraintAtom> first = parse_atom_list(scope);
        if (at(Tok::pipe)) {
            next();
            rule.guard = std::move(first);
            rule.body = parse_atom_list(scope);
            if (at(Tok::pipe)) fail("a rule may contain at most one '|'");
        } else {
            rule.guard.push_back(ConstraintAtom{"true", {}, ConstraintAtom::Kind::builtin});
            rule.body = std::move(first);
        }
        expect(Tok::dot, "'.' after rule");

        // validation
        if (rule.kept.empty() && rule.removed.empty())
            throw ParseError(rule_line, rule_col, "rule with empty head");
        for (const auto& h : rule.kept)
            if (h.is_builtin())
                throw ParseError(rule_line, rule_col,
                                 "built-in constraint '" + h.symbol + "' in rule head");
        for (const auto& h : rule.removed)
            if (h.is_builtin())
                throw ParseError(rule_line, rule_col,
                                 "built-in constraint '" + h.symbol + "' in rule head");
        for (const auto& g : rule.guard)
            if (!g.is_builtin())
                throw ParseError(rule_line, rule_col,
                                 "non-built-in '" + g.symbol + "' in guard");
        if (rule.priority.has_value()) {
            std::set<VarId> head_vars, prio_vars;
            for (const auto& h : rule.kept)
                for (const Term& t : h.args) collect_rule_vars(t, head_vars);
            for (const auto& h : rule.removed)
                for (const Term& t : h.args) collect_rule_vars(t, head_vars);
            collect_rule_vars(*rule.priority, prio_vars);
            for (VarId v : prio_vars)
                if (!head_vars.count(v))
                    throw ParseError(rule_line, rule_col,
                                     "priority mentions non-head variable " +
                                         scope.names[static_cast<std::size_t>(v)]);
        }

        if (rule.name.empty()) {
            std::string generated = "rule_" + std::to_string(rule_index + 1);
            while (names_seen.count(generated)) generated += "_";
            rule.name = generated;
        }
        if (!names_seen.insert(rule.name).second)
            throw ParseError(rule_line, rule_col, "duplicate rule name '" + rule.name + "'");

        rule.var_names = std::move(scope.names);
        return rule;
    }

    Lexer lexer_;
    const std::vector<Token>& toks_;
    std::size_t idx_ = 0;
};

} // namespace

Program parse_program(const std::string& text) {
    Parser p(text);
    return p.parse_program();
}

Query parse_query(const std::string& text, VarTable& vars) {
    Parser p(text);
    return p.parse_query(vars);
}

} // namespace chr
