"""Concrete syntax: parsing, serialization round-trips and DOT export."""

from fractions import Fraction

import pytest

from cplogic import corpus
from cplogic.core import (
    Atom,
    Conjunction,
    Disjunction,
    FormulaAtom,
    Literal,
    Negation,
    TRUE,
)
from cplogic.engine import NO_EFFECT, build_tree, replay_story
from cplogic.errors import (
    NoEffectNotAllowedError,
    OutcomeNotInHeadError,
    ParseError,
    UnknownLabelError,
)
from cplogic.textio import (
    export_tree_dot,
    load_theory,
    parse_context,
    parse_formula,
    parse_literal,
    parse_story,
    parse_theory,
    serialize_theory,
)


class TestParseTheory:
    def test_probability_annotated_law(self):
        doc = parse_theory("shatters:0.9 <- throws_suzy.\n")
        (law,) = doc.theory.laws
        assert law.head[0].atom is Atom("shatters")
        assert law.head[0].prob == Fraction(9, 10)
        assert law.body == (Literal(Atom("throws_suzy")),)

    def test_deterministic_law_sugar(self):
        doc = parse_theory("b <- c.\n")
        (law,) = doc.theory.laws
        assert law.head[0].prob == Fraction(1)
        assert not law.head[0].symbolic

    def test_star_probability_is_flagged_half(self):
        doc = parse_theory("antidote:*.\n")
        (law,) = doc.theory.laws
        assert law.head[0].prob == Fraction(1, 2)
        assert law.head[0].symbolic
        assert law.body == ()

    def test_labels_and_negated_bodies(self):
        doc = parse_theory("@pois: poison <- ~change_of_heart.\n")
        (law,) = doc.theory.laws
        assert law.label == "pois"
        assert law.body == (Literal(Atom("change_of_heart"), False),)

    def test_multi_alternative_head(self):
        doc = parse_theory("a:1/3; b:1/3 <- c.\n")
        (law,) = doc.theory.laws
        assert [alt.prob for alt in law.head] == [Fraction(1, 3), Fraction(1, 3)]

    def test_rational_and_decimal_agree(self):
        one = parse_theory("a:9/10.\n").theory.laws[0].head[0].prob
        two = parse_theory("a:0.9.\n").theory.laws[0].head[0].prob
        assert one == two == Fraction(9, 10)

    def test_exogenous_directive(self):
        doc = parse_theory("exogenous a, b.\nc <- a.\n")
        assert doc.theory.exogenous == frozenset({Atom("a"), Atom("b")})

    def test_comments_and_blank_lines_ignored(self):
        doc = parse_theory("% nothing here\n\n  a.  % trailing\n")
        assert len(doc.theory.laws) == 1

    def test_law_lines_recorded(self):
        doc = parse_theory("% c\na.\n\nb.\n")
        assert doc.law_lines == (2, 4)

    def test_probability_above_one_is_a_parse_error(self):
        with pytest.raises(ParseError) as err:
            parse_theory("a:1.2.\n")
        assert err.value.line == 1

    def test_missing_dot(self):
        with pytest.raises(ParseError):
            parse_theory("a <- b\n")

    def test_unknown_directive_is_rejected(self):
        with pytest.raises(ParseError):
            parse_theory("endogenous a.\n")

    def test_trailing_junk_rejected(self):
        with pytest.raises(ParseError):
            parse_theory("a. b\n")

    def test_reserved_word_as_atom_rejected(self):
        with pytest.raises(ParseError):
            parse_theory("a <- none.\n")

    def test_zero_denominator_rejected(self):
        with pytest.raises(ParseError):
            parse_theory("a:1/0.\n")


class TestParseStory:
    def theory(self):
        return corpus.theory("suzy_billy")

    def test_two_step_story(self):
        story = parse_story(
            "context throws_suzy, throws_billy.\nr1 -> shatters.\nr2 -> shatters.\n",
            self.theory(),
        )
        assert story.context == frozenset({Atom("throws_suzy"), Atom("throws_billy")})
        assert [(s.label, s.outcome) for s in story.steps] == [
            ("r1", Atom("shatters")), ("r2", Atom("shatters")),
        ]

    def test_no_effect_rejected_on_total_head(self):
        theory = load_theory("exogenous c.\nb <- c.\n")
        with pytest.raises(NoEffectNotAllowedError):
            parse_story("context c.\nr1 -> none.\n", theory)

    def test_no_effect_allowed_with_residual_mass(self):
        story = parse_story("context throws_suzy.\nr1 -> none.\n", self.theory())
        assert story.steps[0].outcome is NO_EFFECT

    def test_context_only_story(self):
        story = parse_story("context throws_suzy.\n", self.theory())
        assert story.steps == ()

    def test_empty_context(self):
        theory = corpus.theory("bogus_prevention")
        story = parse_story("context.\ncoh -> change_of_heart.\n", theory)
        assert story.context == frozenset()

    def test_unknown_label(self):
        with pytest.raises(UnknownLabelError):
            parse_story("context.\nr9 -> shatters.\n", self.theory())

    def test_outcome_not_in_head(self):
        with pytest.raises(OutcomeNotInHeadError):
            parse_story("context.\nr1 -> throws_suzy.\n", self.theory())

    def test_story_must_start_with_context(self):
        with pytest.raises(ParseError):
            parse_story("r1 -> shatters.\n", self.theory())


class TestFormulasAndContexts:
    def test_precedence_negation_conjunction_disjunction(self):
        f = parse_formula("a | b & !c")
        assert f == Disjunction((
            FormulaAtom(Atom("a")),
            Conjunction((FormulaAtom(Atom("b")), Negation(FormulaAtom(Atom("c"))))),
        ))

    def test_parentheses(self):
        assert parse_formula("a | (b & !c)") == parse_formula("a | b & !c")
        assert parse_formula("(a | b) & c") == Conjunction((
            Disjunction((FormulaAtom(Atom("a")), FormulaAtom(Atom("b")))),
            FormulaAtom(Atom("c")),
        ))

    def test_conjunction_with_negation(self):
        f = parse_formula("shatters & !dead")
        assert f == Conjunction((
            FormulaAtom(Atom("shatters")), Negation(FormulaAtom(Atom("dead"))),
        ))

    def test_constants(self):
        assert parse_formula("true") is TRUE

    def test_empty_formula_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("")

    def test_trailing_junk_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("a b")

    def test_context_parsing(self):
        assert parse_context("") == frozenset()
        assert parse_context(" a , b ") == frozenset({Atom("a"), Atom("b")})

    def test_literal_parsing(self):
        assert parse_literal("~death") == Literal(Atom("death"), False)
        assert parse_literal("death") == Literal(Atom("death"))


class TestSerialization:
    def test_exact_value_survives_decimal_input(self):
        theory = load_theory("shatters:0.9 <- throws_suzy.\nexogenous throws_suzy.\n")
        text = serialize_theory(theory)
        assert "9/10" in text or "0.9" in text
        again = load_theory(text)
        assert again.laws[0].head[0].prob == Fraction(9, 10)

    def test_labels_written_explicitly(self):
        theory = load_theory("a:1/2.\n")
        assert "@r1:" in serialize_theory(theory)

    def test_exogenous_line_sorted(self):
        theory = load_theory("exogenous b, a.\nc <- a.\n")
        assert serialize_theory(theory).splitlines()[0] == "exogenous a, b."

    def test_star_round_trips(self):
        theory = load_theory("antidote:*.\n")
        text = serialize_theory(theory)
        assert ":*" in text
        assert load_theory(text) == theory

    @pytest.mark.parametrize("entry", corpus.entries(), ids=lambda e: e.name)
    def test_corpus_round_trip(self, entry):
        first = load_theory(corpus.read_text(entry.theory_file))
        second = load_theory(serialize_theory(first))
        assert first == second


class TestDotExport:
    def test_two_thrower_tree_has_seven_nodes(self):
        theory = corpus.theory("suzy_billy")
        ctx = parse_context("throws_suzy, throws_billy")
        dot = export_tree_dot(build_tree(theory, ctx))
        assert dot.count("[label=") - dot.count("->") == 7
        assert dot.count("->") == 6
        assert "r1: shatters 9/10" in dot

    def test_empty_theory_single_node(self):
        dot = export_tree_dot(build_tree(load_theory(""), frozenset()))
        assert dot.count("->") == 0
        assert 'n0 [label="{}"]' in dot

    def test_replayed_story_is_a_path(self):
        theory = corpus.theory("bogus_prevention")
        branch = replay_story(
            theory, corpus.story("bogus_prevention_coh_first.story", theory)
        )
        dot = export_tree_dot(branch, theory=theory)
        assert dot.count("->") == 2
        assert dot.count("[label=") - 2 == 3
        assert "coh: change_of_heart 1/2" in dot
