import numpy as np
import pytest

from spinorsurf.errors import ExprSyntaxError
from spinorsurf.exprparse import Bin, Lit, Neg, Pow, Var, compile_expr, parse_expr


def ev(src, z):
    return complex(np.asarray(compile_expr(src)(z)))


def test_literal():
    ast = parse_expr("1")
    assert ast == Lit(1.0 + 0j)


def test_square_at_one_plus_i():
    assert abs(ev("z^2", 1 + 1j) - 2j) < 1e-15


def test_exp_product():
    assert abs(ev("exp(z)*(1-z^2)", 0.0) - 1.0) < 1e-15
    z = 0.3 + 0.2j
    assert abs(ev("exp(z)*(1-z^2)", z) - np.exp(z) * (1 - z**2)) < 1e-14


def test_imaginary_unit():
    assert abs(ev("i*i", 0.0) + 1.0) < 1e-15
    assert abs(ev("i*(1+z^2)", 1.0) - 2j) < 1e-15


def test_precedence_and_associativity():
    assert abs(ev("-z^2", 2.0) + 4.0) < 1e-15  # ^ binds tighter than unary minus
    assert abs(ev("2^3^2", 0.0) - 512.0) < 1e-12  # right-associative
    assert abs(ev("1-2-3", 0.0) + 4.0) < 1e-15  # left-associative
    assert abs(ev("2+3*4", 0.0) - 14.0) < 1e-15
    assert abs(ev("6/3/2", 0.0) - 1.0) < 1e-15


def test_vectorized_eval():
    z = np.array([[0.0, 1.0], [1j, 2 + 1j]])
    vals = compile_expr("z^2+1")(z)
    assert np.allclose(vals, z**2 + 1)
    consts = compile_expr("2")(z)
    assert consts.shape == z.shape


def test_nested_functions():
    z = 0.4 - 0.1j
    assert abs(ev("sin(cos(z))", z) - np.sin(np.cos(z))) < 1e-14


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as e:
        parse_expr("1+@2")
    assert e.value.offset == 2
    with pytest.raises(ExprSyntaxError):
        parse_expr("(1+2")
    with pytest.raises(ExprSyntaxError):
        parse_expr("exp 2")
    with pytest.raises(ExprSyntaxError):
        parse_expr("w+1")


def test_non_integer_exponent_rejected():
    with pytest.raises(ExprSyntaxError):
        parse_expr("z^0.5")
    with pytest.raises(ExprSyntaxError):
        parse_expr("z^z")
    with pytest.raises(ExprSyntaxError):
        parse_expr("z^i")


def test_negative_exponent_with_parens():
    assert abs(ev("z^(-2)", 2.0) - 0.25) < 1e-15


def test_ast_shape():
    ast = parse_expr("-z^2+1")
    assert isinstance(ast, Bin) and ast.op == "+"
    assert isinstance(ast.left, Neg)
    assert isinstance(ast.left.arg, Pow)
    assert isinstance(ast.left.arg.base, Var)
