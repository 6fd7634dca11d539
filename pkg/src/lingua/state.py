"""Imperative-layer state: environments, valuations, the error register.

States are persistent snapshots: every update returns a fresh State and
leaves the original untouched, which is what lets procedure calls memorize
the caller's state without an explicit stack.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .kernel import AbstractError, LangType, Value
from .nodes import FunProcDec, ImpProcDec


@dataclass(frozen=True)
class ImperativeProc:
    """A declared procedure: its declaration, its multiprocedure group and
    the environment it was declared in (without the group itself; members
    are nested back in at call time, which is what makes recursion work)."""

    name: str
    dec: ImpProcDec
    group: tuple[ImpProcDec, ...]
    env: "Env"


@dataclass(frozen=True)
class FunctionalProc:
    name: str
    dec: FunProcDec
    env: "Env"


Procedure = Union[ImperativeProc, FunctionalProc]


@dataclass(frozen=True)
class Env:
    types: dict[str, LangType]
    procs: dict[str, Procedure]


@dataclass(frozen=True)
class Store:
    valuation: dict[str, Value]
    register: Optional[AbstractError]  # None stands for 'OK'


@dataclass(frozen=True)
class State:
    env: Env
    store: Store

    @property
    def types(self) -> dict[str, LangType]:
        return self.env.types

    @property
    def procs(self) -> dict[str, Procedure]:
        return self.env.procs

    @property
    def valuation(self) -> dict[str, Value]:
        return self.store.valuation

    @property
    def register(self) -> Optional[AbstractError]:
        return self.store.register


def empty_state() -> State:
    return State(Env({}, {}), Store({}, None))


def is_error(sta: State) -> bool:
    return sta.store.register is not None


def load_error(sta: State, err: AbstractError) -> State:
    """The error-insertion operator: replaces the register, nothing else."""
    return State(sta.env, Store(sta.store.valuation, err))


def clear_error(sta: State) -> State:
    return State(sta.env, Store(sta.store.valuation, None))


def register_word(sta: State) -> str:
    return "OK" if sta.store.register is None else sta.store.register.word


def bind_variable(sta: State, ide: str, val: Value) -> State:
    return State(sta.env, Store({**sta.store.valuation, ide: val}, sta.store.register))


def bind_type(sta: State, ide: str, typ: LangType) -> State:
    return State(
        Env({**sta.env.types, ide: typ}, sta.env.procs),
        sta.store,
    )


def bind_procedure(sta: State, ide: str, pro: Procedure) -> State:
    return State(
        Env(sta.env.types, {**sta.env.procs, ide: pro}),
        sta.store,
    )


def lookup_variable(sta: State, ide: str) -> Optional[Value]:
    return sta.store.valuation.get(ide)


def lookup_type(sta: State, ide: str) -> Optional[LangType]:
    return sta.env.types.get(ide)


def lookup_procedure(sta: State, ide: str) -> Optional[Procedure]:
    return sta.env.procs.get(ide)
