"""Shared helpers for the semantics tests."""

from __future__ import annotations

from lingua.kernel import Limits, TT, LangType, NUMBER, Value
from lingua.parser import parse_data_expression, parse_program
from lingua.semantics import Evaluator
from lingua.state import State, bind_variable, empty_state


def eval_text(text, sta=None, limits=Limits(), fuel=None):
    evaluator = Evaluator(limits=limits, fuel=fuel)
    return evaluator.eval_data_exp(
        parse_data_expression(text), sta if sta is not None else empty_state()
    )


def run_text(text, sta=None, limits=Limits(), fuel=None):
    evaluator = Evaluator(limits=limits, fuel=fuel)
    return evaluator.run_program(
        parse_program(text), sta if sta is not None else empty_state()
    )


def number_var(sta: State, name: str, data) -> State:
    return bind_variable(sta, name, Value(data, LangType(NUMBER, TT)))
