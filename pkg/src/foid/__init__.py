"""Proof kernel and finite-domain semantics for first-order logic with inductive definitions."""
from .syntax import (And, App, Atom, Bot, Def, Definition, Eq, Exists, FoidError,
                     Forall, Formula, Hypothesis, Iff, Implies, Not, Obj, Or, Rule,
                     Sequent, Symbol, Top)

__all__ = ["And", "App", "Atom", "Bot", "Def", "Definition", "Eq", "Exists",
           "FoidError", "Forall", "Formula", "Hypothesis", "Iff", "Implies", "Not",
           "Obj", "Or", "Rule", "Sequent", "Symbol", "Top"]
__version__ = "0.1.0"
