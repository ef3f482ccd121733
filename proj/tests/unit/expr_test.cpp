#include <doctest.h>

#include "parared/expr.hpp"

using namespace parared;

TEST_CASE("builders fold constants") {
  Expr x = var("x", Sort::Int);
  CHECK(add(int_lit(2), int_lit(3)) == int_lit(5));
  CHECK(mk_and({tru(), tru()}).is_true());
  CHECK(mk_or({fls(), tru()}).is_true());
  CHECK(mk_and({lt(x, int_lit(1)), fls()}).is_false());
  CHECK(mk_not(mk_not(lt(x, int_lit(1)))) == lt(x, int_lit(1)));
}

TEST_CASE("and/or flatten") {
  Expr a = var("a", Sort::Bool), b = var("b", Sort::Bool), c = var("c", Sort::Bool);
  Expr f = mk_and({a, mk_and({b, c})});
  CHECK(f.op() == Op::And);
  CHECK(f.args().size() == 3);
}

TEST_CASE("substitute leaves bound variables alone") {
  Expr x = var("x", Sort::Int), y = var("y", Sort::Int);
  Expr f = mk_and({lt(x, y), forall({{"x", Sort::Int}}, le(x, y))});
  Expr g = substitute(f, std::map<std::string, Expr>{{"x", int_lit(7)}});
  CHECK(free_var_names(g) == std::set<std::string>{"y"});
  CHECK(to_smtlib(g).find("(forall ((x Int))") != std::string::npos);
}

TEST_CASE("inline_function binds formals") {
  Expr f = app("Inv", {int_lit(1), var("z", Sort::Int)});
  Expr g = inline_function(f, "Inv", {{"a", Sort::Int}, {"b", Sort::Int}}, lt(var("a", Sort::Int), var("b", Sort::Int)));
  CHECK(g == lt(int_lit(1), var("z", Sort::Int)));
}

TEST_CASE("smtlib printing") {
  Expr x = var("x", Sort::Int, ThreadRef::Self);
  CHECK(to_smtlib(le(x, int_lit(-1))) == "(<= x@i (- 1))");
  CHECK(smt_var_name("v", ThreadRef::Other) == "v@j");
  CHECK(smt_symbol("a.1") == "a.1");
  CHECK(smt_symbol("a b") == "|a b|");
}

TEST_CASE("dsl printing parenthesizes negated comparisons") {
  Expr pc = var("pc", Sort::Int);
  CHECK(to_dsl(mk_not(le(int_lit(1), pc))).find("!(") == 0);
}

TEST_CASE("free vars distinguish thread refs") {
  Expr f = eq(var("v", Sort::Int, ThreadRef::Self), var("v", Sort::Int, ThreadRef::Other));
  CHECK(free_vars(f).size() == 2);
  CHECK(free_var_names(f).size() == 1);
}
