"""
Tests for layered theories, the connected-theory verifier and the constructor.
"""

import pytest

from apps.core.exceptions import (
    DegenerateTheoryError,
    LayeredTheoryError,
    NonGroundError,
    NotEntailedError,
    PreconditionError,
)
from apps.logic.connected import (
    CONDITION_ABDUCIBLE,
    CONDITION_BASE,
    CONDITION_CHAIN,
    CONDITION_CONSISTENT,
    CONDITION_EXAMPLE,
    LayeredTheory,
    assign_layers,
    build_connected_theory,
    construct_connected_theory,
    verify_connected_theory,
)
from apps.logic.parser import parse_atom

from .helpers import layered, open_program, theory


class TestLayeredTheory:
    """Test the layered theory value."""

    def test_layers_are_one_based(self, chain_program):
        """layer(1) is the top layer, layer(n) the base layer."""
        _, _, lt = chain_program
        assert lt.n == 2
        assert [str(c) for c in lt.layer(1)] == ["c :- b."]
        assert [str(c) for c in lt.layer(2)] == ["b :- a."]
        assert len(lt.union()) == 2

    def test_needs_a_layer(self):
        """n >= 1."""
        with pytest.raises(LayeredTheoryError):
            LayeredTheory(())

    def test_layers_are_nonempty(self):
        """Every layer holds at least one clause."""
        with pytest.raises(LayeredTheoryError, match="Layer 2 is empty"):
            layered(["c :- b."], [], ["b :- a."])

    def test_layers_are_disjoint(self):
        """A clause sits in one layer only."""
        with pytest.raises(LayeredTheoryError, match="disjoint"):
            layered(["b :- a."], ["b :- a."])

    def test_layers_are_ground(self):
        """Layer clauses have no variables."""
        with pytest.raises(NonGroundError):
            layered(["p(X) :- q(X)."])


class TestVerifyConnectedTheory:
    """Test each condition and that every condition discriminates."""

    def test_all_conditions_hold(self, chain_program):
        """The two-layer chain theory is connected and abducible."""
        program, example, lt = chain_program
        report = verify_connected_theory(program, example, lt)
        assert report.passed
        assert report.connected
        assert report.condition_chain == [True]
        assert report.failures == []
        assert report.failed_conditions() == []

    def test_base_condition(self, chain_program):
        """Base-layer bodies must follow from B."""
        program, example, _ = chain_program
        report = verify_connected_theory(program, example, layered(["c :- b."], ["b :- d."]))
        assert report.failed_conditions() == [CONDITION_BASE]
        assert [(f.condition, f.subject) for f in report.failures] == [(CONDITION_BASE, "d")]

    def test_chain_condition(self, chain_program):
        """Each layer's bodies must follow from B plus deeper heads."""
        program, example, _ = chain_program
        report = verify_connected_theory(program, example, layered(["c :- d."], ["b :- a."]))
        assert report.failed_conditions() == [CONDITION_CHAIN]
        assert report.condition_chain == [False]
        assert [(f.condition, f.subject) for f in report.failures] == [("chain[1]", "d")]

    def test_example_condition(self, chain_program):
        """B plus all heads must derive the example."""
        program, example, _ = chain_program
        report = verify_connected_theory(program, example, layered(["b :- a."]))
        assert report.failed_conditions() == [CONDITION_EXAMPLE]
        assert report.condition_chain == []

    def test_consistency_condition(self, chain_program):
        """B ∪ T must satisfy every constraint."""
        _, example, lt = chain_program
        program = open_program("a.", {("b", 0), ("c", 0)}, ":- c.")
        report = verify_connected_theory(program, example, lt)
        assert report.failed_conditions() == [CONDITION_CONSISTENT]
        assert report.failures[0].subject == ":- c. violated by c"

    def test_abducible_flag(self, chain_program):
        """Non-abducible heads fail the abducible flag but not connectedness."""
        _, example, lt = chain_program
        program = open_program("a.", {("c", 0)})
        report = verify_connected_theory(program, example, lt)
        assert report.connected
        assert not report.passed
        assert report.failed_conditions() == [CONDITION_ABDUCIBLE]
        assert report.failures[0].subject == "b :- a."

    def test_example_must_be_ground(self, chain_program):
        """The example is a ground atom."""
        program, _, lt = chain_program
        with pytest.raises(NonGroundError):
            verify_connected_theory(program, parse_atom("p(X)"), lt)

    def test_report_dict(self, chain_program):
        """The report serializes every condition."""
        program, example, lt = chain_program
        data = verify_connected_theory(program, example, lt).to_dict()
        assert data["passed"] is True
        assert data["condition_chain"] == [True]
        assert set(data) >= {
            "condition_base",
            "condition_example",
            "condition_consistent",
            "condition_abducible",
            "failures",
        }


class TestAssignLayers:
    """Test layering by firing depth."""

    def test_deepest_clause_is_top_layer(self, chain_program):
        """Clauses firing later sit in lower-numbered layers."""
        _, _, lt = chain_program
        assert assign_layers(theory("b :- a.", "c :- b."), theory("a.")) == lt

    def test_equal_depths_share_a_layer(self):
        """Clauses firing at the same depth form one layer."""
        result = assign_layers(theory("b :- a.", "c :- a."), theory("a."))
        assert result.n == 1
        assert len(result.layer(1)) == 2

    def test_empty_theory(self):
        """There is nothing to layer."""
        with pytest.raises(LayeredTheoryError):
            assign_layers(theory(), theory("a."))

    def test_clause_that_never_fires(self):
        """A clause whose body is underivable cannot be placed."""
        with pytest.raises(LayeredTheoryError, match="never used"):
            assign_layers(theory("c :- z."), theory("a."))

    def test_non_ground_clause(self):
        """Only ground clauses are layered."""
        with pytest.raises(NonGroundError):
            assign_layers(theory("p(X) :- a."), theory("a."))


class TestConstruction:
    """Test T = S ∩ ground(H)."""

    def test_two_layer_construction(self, chain_program):
        """A chain hypothesis yields a two-layer connected theory."""
        program, example, lt = chain_program
        hypothesis = theory("b :- a.", "c :- b.")
        construction = build_connected_theory(program, hypothesis, example)
        assert construction.layered == lt
        assert verify_connected_theory(program, example, construction.layered).passed
        assert set(construction.instances) == set(lt.union())
        assert [str(c) for c in construction.support] == ["a.", "b :- a.", "c :- b."]

    def test_construction_grounds_hypothesis(self, birds):
        """Non-ground hypotheses contribute their used instances."""
        program, example = birds
        lt = construct_connected_theory(program, theory("flies(X) :- bird(X)."), example)
        assert [str(c) for c in lt.union()] == ["flies(a) :- bird(a)."]

    def test_not_entailed(self, chain_program):
        """H must be an inductive solution."""
        program, example, _ = chain_program
        with pytest.raises(NotEntailedError):
            build_connected_theory(program, theory("b :- a."), example)

    def test_inconsistent(self, chain_program):
        """B ∪ H ∪ I must be consistent."""
        _, example, _ = chain_program
        program = open_program("a.", {("b", 0), ("c", 0)}, ":- b.")
        with pytest.raises(PreconditionError) as exc_info:
            build_connected_theory(program, theory("b :- a.", "c :- b."), example)
        assert not isinstance(exc_info.value, NotEntailedError)

    def test_degenerate_when_background_suffices(self):
        """No connected theory arises when B alone derives e."""
        program = open_program("a.\nc :- a.", {("b", 0)})
        with pytest.raises(DegenerateTheoryError):
            build_connected_theory(program, theory("b :- a."), parse_atom("c"))
