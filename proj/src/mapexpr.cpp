#include "helixlab/mapexpr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace helixlab {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen,
                 Question, Colon, Lt, Eq, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[i_]))) {
            if (src_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++i_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (i_ >= src_.size()) {
            tok_ = {Tok::End, "", line_, col_};
            return;
        }
        char c = src_[i_];
        auto single = [&](Tok k) {
            tok_ = {k, std::string(1, c), line_, col_};
            ++i_;
            ++col_;
        };
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = i_;
            while (j < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.'))
                ++j;
            // exponent suffix
            if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
                size_t k = j + 1;
                if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
                if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                    j = k;
                    while (j < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[j])))
                        ++j;
                }
            }
            tok_ = {Tok::Num, src_.substr(i_, j - i_), line_, col_};
            col_ += static_cast<int>(j - i_);
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_ = {Tok::Ident, src_.substr(i_, j - i_), line_, col_};
            col_ += static_cast<int>(j - i_);
            i_ = j;
            return;
        }
        switch (c) {
            case '+': single(Tok::Plus); return;
            case '-': single(Tok::Minus); return;
            case '*': single(Tok::Star); return;
            case '/': single(Tok::Slash); return;
            case '^': single(Tok::Caret); return;
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case '?': single(Tok::Question); return;
            case ':': single(Tok::Colon); return;
            case '<': single(Tok::Lt); return;
            case '=': single(Tok::Eq); return;
            default:
                throw SyntaxError("unexpected character '" + std::string(1, c) + "'",
                                  line_, col_);
        }
    }

    const std::string& src_;
    size_t i_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// ---------------------------------------------------------------------------
// Parser

std::optional<Func> func_by_name(const std::string& s) {
    if (s == "sinpi") return Func::SinPi;
    if (s == "sin") return Func::Sin;
    if (s == "cos") return Func::Cos;
    if (s == "gamma") return Func::Gamma;
    if (s == "floor") return Func::Floor;
    if (s == "abs") return Func::Abs;
    return std::nullopt;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::SinPi: return "sinpi";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Gamma: return "gamma";
        case Func::Floor: return "floor";
        case Func::Abs: return "abs";
    }
    return "?";
}

ExprPtr node(Expr e) { return std::make_shared<Expr>(std::move(e)); }

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (lex_.peek().kind != Tok::End) {
            fail("unexpected token '" + lex_.peek().text + "'");
        }
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError(msg, lex_.peek().line, lex_.peek().col);
    }

    void expect(Tok k, const char* what) {
        if (lex_.peek().kind != k) fail(std::string("expected ") + what);
        lex_.take();
    }

    ExprPtr expr() {
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "isint") {
            lex_.take();
            expect(Tok::LParen, "'(' after isint");
            ExprPtr inner = expr();
            expect(Tok::RParen, "')'");
            return ternary(Expr::Pred::IsInt, inner, nullptr);
        }
        ExprPtr lhs = sum();
        if (lex_.peek().kind == Tok::Lt) {
            lex_.take();
            return ternary(Expr::Pred::Lt, lhs, sum());
        }
        if (lex_.peek().kind == Tok::Eq) {
            lex_.take();
            return ternary(Expr::Pred::Eq, lhs, sum());
        }
        if (lex_.peek().kind == Tok::Question) {
            fail("'?' requires a predicate (isint, <, =)");
        }
        return lhs;
    }

    ExprPtr ternary(Expr::Pred pred, ExprPtr a, ExprPtr b) {
        expect(Tok::Question, "'?'");
        ExprPtr t = expr();
        expect(Tok::Colon, "':'");
        ExprPtr e = expr();
        Expr c;
        c.kind = Expr::Kind::Cond;
        c.pred = pred;
        c.a = std::move(a);
        c.b = std::move(b);
        c.then_e = std::move(t);
        c.else_e = std::move(e);
        return node(std::move(c));
    }

    ExprPtr sum() {
        ExprPtr e = term();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k != Tok::Plus && k != Tok::Minus) return e;
            lex_.take();
            Expr n;
            n.kind = (k == Tok::Plus) ? Expr::Kind::Add : Expr::Kind::Sub;
            n.a = std::move(e);
            n.b = term();
            e = node(std::move(n));
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k != Tok::Star && k != Tok::Slash) return e;
            lex_.take();
            Expr n;
            n.kind = (k == Tok::Star) ? Expr::Kind::Mul : Expr::Kind::Div;
            n.a = std::move(e);
            n.b = unary();
            e = node(std::move(n));
        }
    }

    ExprPtr unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            Expr n;
            n.kind = Expr::Kind::Neg;
            n.a = unary();
            return node(std::move(n));
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (lex_.peek().kind != Tok::Caret) return base;
        lex_.take();
        bool neg = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            neg = true;
        }
        if (lex_.peek().kind != Tok::Num) fail("'^' requires an integer literal exponent");
        Token t = lex_.take();
        if (t.text.find('.') != std::string::npos ||
            t.text.find('e') != std::string::npos ||
            t.text.find('E') != std::string::npos)
            throw SyntaxError("'^' exponent must be an integer", t.line, t.col);
        long e = std::stol(t.text);
        Expr n;
        n.kind = Expr::Kind::Pow;
        n.ipow = neg ? -e : e;
        n.a = std::move(base);
        return node(std::move(n));
    }

    ExprPtr atom() {
        const Token& p = lex_.peek();
        if (p.kind == Tok::Num) {
            Token t = lex_.take();
            Expr n;
            n.kind = Expr::Kind::Number;
            Real v = [&] {
                try {
                    return Real::parse(t.text,
                                       std::max<int>(Real::kMinDigits,
                                                     static_cast<int>(t.text.size())));
                } catch (const NumericError& e) {
                    throw SyntaxError(e.what(), t.line, t.col);
                }
            }();
            n.text = v.str();
            return node(std::move(n));
        }
        if (p.kind == Tok::Ident) {
            Token t = lex_.take();
            if (t.text == "x") {
                Expr n;
                n.kind = Expr::Kind::Var;
                return node(std::move(n));
            }
            if (auto f = func_by_name(t.text)) {
                expect(Tok::LParen, "'(' after function name");
                ExprPtr arg = expr();
                expect(Tok::RParen, "')'");
                Expr n;
                n.kind = Expr::Kind::Call;
                n.func = *f;
                n.a = std::move(arg);
                return node(std::move(n));
            }
            if (t.text == "isint") {
                throw SyntaxError("isint(...) is only valid as a predicate", t.line, t.col);
            }
            Expr n;
            n.kind = Expr::Kind::Param;
            n.text = t.text;
            return node(std::move(n));
        }
        if (p.kind == Tok::LParen) {
            lex_.take();
            ExprPtr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        fail("expected expression");
    }

    Lexer lex_;
};

void collect_params(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::Param) out.insert(e.text);
    for (const ExprPtr& c : {e.a, e.b, e.then_e, e.else_e}) {
        if (c) collect_params(*c, out);
    }
}

// ---------------------------------------------------------------------------
// Printer

// precedence levels: 0 cond, 1 sum, 2 term, 3 unary, 4 pow, 5 atom
int level_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Cond: return 0;
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

void print(const Expr& e, int min_level, std::string& out) {
    bool parens = level_of(e) < min_level;
    if (parens) out += "(";
    switch (e.kind) {
        case Expr::Kind::Number: out += e.text; break;
        case Expr::Kind::Var: out += "x"; break;
        case Expr::Kind::Param: out += e.text; break;
        case Expr::Kind::Neg:
            out += "-";
            print(*e.a, 3, out);
            break;
        case Expr::Kind::Add:
            print(*e.a, 1, out);
            out += " + ";
            print(*e.b, 2, out);
            break;
        case Expr::Kind::Sub:
            print(*e.a, 1, out);
            out += " - ";
            print(*e.b, 2, out);
            break;
        case Expr::Kind::Mul:
            print(*e.a, 2, out);
            out += "*";
            print(*e.b, 3, out);
            break;
        case Expr::Kind::Div:
            print(*e.a, 2, out);
            out += "/";
            print(*e.b, 3, out);
            break;
        case Expr::Kind::Pow:
            print(*e.a, 5, out);
            out += "^" + std::to_string(e.ipow);
            break;
        case Expr::Kind::Call:
            out += func_name(e.func);
            out += "(";
            print(*e.a, 0, out);
            out += ")";
            break;
        case Expr::Kind::Cond:
            if (e.pred == Expr::Pred::IsInt) {
                out += "isint(";
                print(*e.a, 0, out);
                out += ")";
            } else {
                print(*e.a, 1, out);
                out += (e.pred == Expr::Pred::Lt) ? " < " : " = ";
                print(*e.b, 1, out);
            }
            out += " ? ";
            print(*e.then_e, 1, out);
            out += " : ";
            print(*e.else_e, 1, out);
            break;
    }
    if (parens) out += ")";
}

Real apply_func(Func f, const Real& v) {
    switch (f) {
        case Func::SinPi: return sin_pi(v);
        case Func::Sin: return sin_r(v);
        case Func::Cos: return cos_r(v);
        case Func::Gamma: return gamma(v);
        case Func::Floor: return v.floor();
        case Func::Abs: return v.abs();
    }
    throw NumericError("unknown function");
}

}  // namespace

MapSpec parse_map(const std::string& text, const std::string& name) {
    MapSpec spec;
    spec.name = name;
    spec.source = text;
    spec.ast = Parser(text).parse();
    std::set<std::string> ps;
    collect_params(*spec.ast, ps);
    spec.params.assign(ps.begin(), ps.end());
    return spec;
}

std::string pretty_print(const MapSpec& spec) {
    std::string out;
    print(*spec.ast, 0, out);
    return out;
}

Real eval_ast(const Expr& e, const Real& x, const Params& params, int prec) {
    switch (e.kind) {
        case Expr::Kind::Number: return Real::parse(e.text, prec);
        case Expr::Kind::Var: return x;
        case Expr::Kind::Param: {
            auto it = params.find(e.text);
            if (it == params.end()) throw UnboundParameter(e.text);
            return it->second.with_precision(prec);
        }
        case Expr::Kind::Neg: return -eval_ast(*e.a, x, params, prec);
        case Expr::Kind::Add:
            return eval_ast(*e.a, x, params, prec) + eval_ast(*e.b, x, params, prec);
        case Expr::Kind::Sub:
            return eval_ast(*e.a, x, params, prec) - eval_ast(*e.b, x, params, prec);
        case Expr::Kind::Mul:
            return eval_ast(*e.a, x, params, prec) * eval_ast(*e.b, x, params, prec);
        case Expr::Kind::Div:
            return eval_ast(*e.a, x, params, prec) / eval_ast(*e.b, x, params, prec);
        case Expr::Kind::Pow:
            return Real::pow_int(eval_ast(*e.a, x, params, prec), e.ipow);
        case Expr::Kind::Call:
            return apply_func(e.func, eval_ast(*e.a, x, params, prec));
        case Expr::Kind::Cond: {
            bool taken;
            if (e.pred == Expr::Pred::IsInt) {
                taken = eval_ast(*e.a, x, params, prec).is_integer();
            } else {
                Real lhs = eval_ast(*e.a, x, params, prec);
                Real rhs = eval_ast(*e.b, x, params, prec);
                taken = (e.pred == Expr::Pred::Lt) ? (lhs < rhs) : (lhs == rhs);
            }
            return eval_ast(taken ? *e.then_e : *e.else_e, x, params, prec);
        }
    }
    throw NumericError("corrupt AST");
}

// ---------------------------------------------------------------------------
// Compiler + stack machine

class Compiler {
  public:
    EvalProgram run(const MapSpec& spec) {
        prog_.param_names_ = spec.params;
        emit_expr(*spec.ast);
        resolve_params();
        return std::move(prog_);
    }

  private:
    using Op = EvalProgram::Op;

    void emit(Op op, std::int32_t arg = 0, long iarg = 0) {
        prog_.code_.push_back({op, arg, iarg});
    }

    std::int32_t const_index(const std::string& text) {
        for (size_t i = 0; i < prog_.consts_.size(); ++i) {
            if (prog_.consts_[i] == text) return static_cast<std::int32_t>(i);
        }
        prog_.consts_.push_back(text);
        return static_cast<std::int32_t>(prog_.consts_.size() - 1);
    }

    void emit_expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Number:
                emit(Op::PushConst, const_index(e.text));
                break;
            case Expr::Kind::Var:
                emit(Op::PushX);
                break;
            case Expr::Kind::Param: {
                emit(Op::PushParam, 0, 0);
                pending_params_.push_back({prog_.code_.size() - 1, e.text});
                break;
            }
            case Expr::Kind::Neg:
                emit_expr(*e.a);
                emit(Op::Neg);
                break;
            case Expr::Kind::Add:
            case Expr::Kind::Sub:
            case Expr::Kind::Mul:
            case Expr::Kind::Div: {
                emit_expr(*e.a);
                emit_expr(*e.b);
                Op op = e.kind == Expr::Kind::Add   ? Op::Add
                        : e.kind == Expr::Kind::Sub ? Op::Sub
                        : e.kind == Expr::Kind::Mul ? Op::Mul
                                                    : Op::Div;
                emit(op);
                break;
            }
            case Expr::Kind::Pow:
                emit_expr(*e.a);
                emit(Op::Pow, 0, e.ipow);
                break;
            case Expr::Kind::Call:
                emit_expr(*e.a);
                emit(Op::Call, static_cast<std::int32_t>(e.func));
                break;
            case Expr::Kind::Cond: {
                if (e.pred == Expr::Pred::IsInt) {
                    emit_expr(*e.a);
                    emit(Op::IsInt);
                } else {
                    emit_expr(*e.a);
                    emit_expr(*e.b);
                    emit(e.pred == Expr::Pred::Lt ? Op::Lt : Op::Eq);
                }
                size_t jz = prog_.code_.size();
                emit(Op::Jz);
                emit_expr(*e.then_e);
                size_t jmp = prog_.code_.size();
                emit(Op::Jmp);
                prog_.code_[jz].arg = static_cast<std::int32_t>(prog_.code_.size());
                emit_expr(*e.else_e);
                prog_.code_[jmp].arg = static_cast<std::int32_t>(prog_.code_.size());
                break;
            }
        }
    }

    void resolve_params() {
        for (auto& [idx, name] : pending_params_) {
            auto it = std::find(prog_.param_names_.begin(), prog_.param_names_.end(), name);
            prog_.code_[idx].arg =
                static_cast<std::int32_t>(it - prog_.param_names_.begin());
        }
    }

    EvalProgram prog_;
    std::vector<std::pair<size_t, std::string>> pending_params_;
};

namespace {

Real run_machine(const std::vector<EvalProgram::Instr>& code, const Real* consts,
                 const Real* args, const Real& x, int prec) {
    std::vector<Real> stack;
    stack.reserve(8);
    bool flag = false;
    size_t pc = 0;
    using Op = EvalProgram::Op;
    while (pc < code.size()) {
        const auto& in = code[pc];
        switch (in.op) {
            case Op::PushConst: stack.push_back(consts[in.arg]); ++pc; break;
            case Op::PushX: stack.push_back(x); ++pc; break;
            case Op::PushParam: stack.push_back(args[in.arg]); ++pc; break;
            case Op::Neg: stack.back() = -stack.back(); ++pc; break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: {
                Real b = std::move(stack.back());
                stack.pop_back();
                Real& a = stack.back();
                switch (in.op) {
                    case Op::Add: a = a + b; break;
                    case Op::Sub: a = a - b; break;
                    case Op::Mul: a = a * b; break;
                    default: a = a / b; break;
                }
                ++pc;
                break;
            }
            case Op::Pow:
                stack.back() = Real::pow_int(stack.back(), in.iarg);
                ++pc;
                break;
            case Op::Call:
                stack.back() = apply_func(static_cast<Func>(in.arg), stack.back());
                ++pc;
                break;
            case Op::IsInt:
                flag = stack.back().is_integer();
                stack.pop_back();
                ++pc;
                break;
            case Op::Lt:
            case Op::Eq: {
                Real b = std::move(stack.back());
                stack.pop_back();
                Real a = std::move(stack.back());
                stack.pop_back();
                flag = (in.op == Op::Lt) ? (a < b) : (a == b);
                ++pc;
                break;
            }
            case Op::Jz:
                pc = flag ? pc + 1 : static_cast<size_t>(in.arg);
                break;
            case Op::Jmp:
                pc = static_cast<size_t>(in.arg);
                break;
        }
    }
    if (stack.size() != 1) throw NumericError("corrupt program");
    return std::move(stack.back());
}

}  // namespace

EvalProgram compile(const MapSpec& spec) { return Compiler().run(spec); }

Real EvalProgram::run(const Real& x, const Params& params, int prec) const {
    std::vector<Real> consts;
    consts.reserve(consts_.size());
    for (const auto& s : consts_) consts.push_back(Real::parse(s, prec));
    std::vector<Real> args;
    args.reserve(param_names_.size());
    for (const auto& name : param_names_) {
        auto it = params.find(name);
        if (it == params.end()) throw UnboundParameter(name);
        args.push_back(it->second.with_precision(prec));
    }
    return run_machine(code_, consts.data(), args.data(), x, prec);
}

BoundMap::BoundMap(const MapSpec& spec, const Params& params, int prec)
    : prog_(compile(spec)), prec_(prec) {
    for (const auto& name : prog_.params()) {
        auto it = params.find(name);
        if (it == params.end()) throw UnboundParameter(name);
        args_.push_back(it->second.with_precision(prec));
    }
    // Real::parse is deterministic, so caching constants is digit-identical
    // to per-call parsing.
    for (const auto& c : prog_.consts()) consts_.push_back(Real::parse(c, prec));
}

Real BoundMap::operator()(const Real& x) const {
    return run_machine(prog_.code(), consts_.data(), args_.data(), x, prec_);
}

}  // namespace helixlab
