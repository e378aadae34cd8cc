#pragma once

#include "helixlab/real.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace helixlab {

struct SyntaxError : std::runtime_error {
    SyntaxError(const std::string& what, int line, int col)
        : std::runtime_error(what + " at " + std::to_string(line) + ":" +
                             std::to_string(col)),
          line(line),
          col(col) {}
    int line, col;
};

struct UnboundParameter : std::runtime_error {
    explicit UnboundParameter(const std::string& name)
        : std::runtime_error("unbound parameter '" + name + "'"), name(name) {}
    std::string name;
};

enum class Func { SinPi, Sin, Cos, Gamma, Floor, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression AST over variable x, named parameters, decimal literals,
// {+,-,*,/,^int}, {sinpi,sin,cos,gamma,floor,abs} and conditional nodes
// with predicates {isint(e), e<e, e=e}.
struct Expr {
    enum class Kind { Number, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Call, Cond };
    enum class Pred { IsInt, Lt, Eq };

    Kind kind;
    std::string text;  // canonical literal (Number) or name (Param)
    Func func{};
    long ipow = 0;
    Pred pred{};
    ExprPtr a, b;             // operands; for Cond these are the predicate operands
    ExprPtr then_e, else_e;   // Cond branches
};

struct MapSpec {
    std::string name;
    std::string source;
    ExprPtr ast;
    std::vector<std::string> params;  // sorted, unique
};

MapSpec parse_map(const std::string& text, const std::string& name = "");

// Canonical text form; pretty_print(parse_map(s)) is a fixed point.
std::string pretty_print(const MapSpec& spec);

using Params = std::map<std::string, Real>;

// Direct AST interpretation at the given working precision.
Real eval_ast(const Expr& e, const Real& x, const Params& params, int prec);

// Linear stack-machine program; evaluation matches eval_ast op for op.
class EvalProgram {
  public:
    enum class Op : std::uint8_t {
        PushConst, PushX, PushParam,
        Neg, Add, Sub, Mul, Div, Pow, Call,
        IsInt, Lt, Eq, Jz, Jmp,
    };
    struct Instr {
        Op op;
        std::int32_t arg = 0;  // const/param index, jump target, func
        long iarg = 0;         // integer exponent
    };

    Real run(const Real& x, const Params& params, int prec) const;

    const std::vector<Instr>& code() const { return code_; }
    const std::vector<std::string>& consts() const { return consts_; }
    const std::vector<std::string>& params() const { return param_names_; }

  private:
    friend class Compiler;
    std::vector<Instr> code_;
    std::vector<std::string> consts_;
    std::vector<std::string> param_names_;
};

EvalProgram compile(const MapSpec& spec);

// A compiled program with parameters bound and constants materialized at a
// fixed working precision. Immutable and safe to share between threads.
class BoundMap {
  public:
    BoundMap(const MapSpec& spec, const Params& params, int prec);
    Real operator()(const Real& x) const;
    int precision() const { return prec_; }

  private:
    EvalProgram prog_;
    std::vector<Real> consts_;
    std::vector<Real> args_;
    int prec_;
};

}  // namespace helixlab
