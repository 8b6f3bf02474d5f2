import io

import pytest
from hypothesis import given, settings, strategies as st

from dhatu.classifier import CELLS, Person, SuffixTable, TenseClass, load_suffix_table
from dhatu.extractor import (MAX_RULE_DEPTH, EmptyStemError, RepairCycleError, RuleError,
                             RuleSet, analyze_compound, extract_root, load_rules,
                             nonfinite_analyses, repair, strip)
from dhatu.script import SegmentationError

SPEC_RULE = "R1\tে$\t→\t(none)\ttense∈{0001,0100} ∧ stem_vowels≥1\t10"


def _match(table, word, suffix):
    return next(m for m in table.match(word) if m.entry.suffix == suffix)


# -- rule loading -------------------------------------------------------------


def test_load_rule_line():
    rules = load_rules([SPEC_RULE])
    (rule,) = list(rules)
    assert rule.id == "R1"
    assert rule.tail_pattern == "ে$"
    assert rule.priority == 10
    assert rule.rewrite.apply("খে") == "খ"


def test_condition_gates_firing():
    rule = load_rules([SPEC_RULE])["R1"]
    from dhatu.script import features
    fv = features("খে")
    assert rule.fires("খে", fv, TenseClass.PRESENT_CONTINUOUS, frozenset(), "chalit") == "খ"
    assert rule.fires("খে", fv, TenseClass.SIMPLE_FUTURE, frozenset(), "chalit") is None


def test_empty_rule_stream_makes_repair_identity():
    rules = load_rules([])
    assert len(rules) == 0
    assert [c.root for c in repair("খে", TenseClass.PRESENT_PERFECT, (), "chalit", rules)] == ["খে"]


def test_sadhu_participle_unification_rule():
    # sadhu খাইয়া and chalit খেয়ে are the same participle
    rules = load_rules(["U1\tাইয়া$\t→\tেয়ে\tregister=sadhu\t5"])
    cands = repair("খাইয়া", None, (), "sadhu", rules)
    assert cands[0].root == "খেয়ে" and cands[0].trace == ("U1",)
    assert repair("খাইয়া", None, (), "chalit", rules)[0].trace == ()


def test_ascii_arrow_and_comments():
    rules = load_rules(["# comment", "", "A\tি$\t->\tে\tchar_count=1\t3"])
    assert rules["A"].rewrite.apply("দি") == "দে"


def test_priority_then_file_order():
    rules = load_rules([
        "B\tি$\t→\tে\ttrue\t5",
        "A\tু$\t→\tো\ttrue\t1",
        "C\tা$\t→\tে\ttrue\t5",
    ])
    assert [r.id for r in rules] == ["A", "B", "C"]


@pytest.mark.parametrize("line,needle", [
    ("R\tে$\t→\t(none)\ttense∈{0001}", "expected"),
    ("R\tে$\t=>\t(none)\ttrue\t1", "expected"),
    ("R\t\t→\t(none)\ttrue\t1", "empty"),
    ("R\tে(\t→\t(none)\ttrue\t1", "unsupported"),
    ("R\tে$\t→\t(none)\tcolour=3\t1", "unknown feature"),
    ("R\tে$\t→\t(none)\ttense∈{1111}\t1", "tense"),
    ("R\tে$\t→\t(none)\tmaybe\t1", "cannot parse"),
    ("R\tে$\t→\t(none)\ttrue\tfirst", "invalid literal"),
    ("R\tে$\t→\tCC\ttrue\t1", "more C"),
])
def test_bad_rule_lines_report_line_number(line, needle):
    with pytest.raises(RuleError, match=r":2: .*" + needle):
        load_rules(["# rules", line])


def test_duplicate_rule_id():
    with pytest.raises(RuleError, match="duplicate"):
        load_rules(["A\tি$\t→\tে\ttrue\t1", "A\tু$\t→\tো\ttrue\t1"])


def test_error_names_source_file():
    src = io.StringIO("bad line\n")
    src.name = "core.rules"
    with pytest.raises(RuleError, match=r"^core\.rules:1:"):
        load_rules(src)


def test_wildcards_copy_captures():
    rules = load_rules(["H\tিC$\t→\tেC\tchar_count=2\t1"])
    assert rules["H"].rewrite.apply("লিখ") == "লেখ"
    assert rules["H"].rewrite.apply("পড়") is None


# -- strip --------------------------------------------------------------------


def test_strip_cluster_suffix(table):
    assert strip("খেলছিলাম", _match(table, "খেলছিলাম", "ছিলাম")) == ("খে", "ল")


def test_strip_sign_suffix(table):
    assert strip("খেলি", _match(table, "খেলি", "ি")) == ("খে", "ল")


def test_strip_whole_word_is_an_error():
    table = load_suffix_table(["ি\t0000\t01\tchalit"])
    from dhatu.classifier import SuffixMatch
    entry = next(iter(table))
    with pytest.raises(EmptyStemError, match="consumes whole word"):
        strip("ি", SuffixMatch(entry, (), 1))


# -- repair -------------------------------------------------------------------


def test_repair_perfect_stem_kha(rules):
    cands = repair("খে", TenseClass.PRESENT_PERFECT, (), "chalit", rules)
    assert cands[0].root == "খা"
    assert cands[-1].root == "খে"


def test_repair_root_is_identity(rules):
    cands = repair("খেল", TenseClass.SIMPLE_PRESENT, (), "chalit", rules)
    assert cands[0].root == "খেল" and cands[0].trace == ()


def test_repair_high_vowel_alternation(rules):
    cands = repair("লিখ", TenseClass.PRESENT_CONTINUOUS, (), "chalit", rules)
    assert cands[0].root == "লেখ"


def test_repair_costs_ascend(rules):
    cands = repair("গিয়", TenseClass.PRESENT_PERFECT, CELLS, "chalit", rules)
    costs = [c.cost for c in cands[:-1]]
    assert costs == sorted(costs)


def test_repair_detects_cycle():
    rules = load_rules(["A\tক$\t→\tখ\ttrue\t1", "B\tখ$\t→\tক\ttrue\t1"])
    with pytest.raises(RepairCycleError) as err:
        repair("কক", None, (), None, rules)
    assert err.value.rule_ids == ("A", "B")


def test_repair_depth_is_bounded():
    rules = load_rules(["A\tক$\t→\tকক\ttrue\t1"])
    cands = repair("ক", None, (), None, rules)
    assert max(len(c.trace) for c in cands) == MAX_RULE_DEPTH


def test_repair_rejects_empty_stem(rules):
    with pytest.raises(EmptyStemError):
        repair("", None, (), None, rules)


def test_rule_never_empties_stem():
    rules = load_rules(["Z\tক$\t→\t(none)\ttrue\t1"])
    assert [c.root for c in repair("ক", None, (), None, rules)] == ["ক"]


# -- extract_root -------------------------------------------------------------


def test_khelbo(table, rules):
    a = extract_root("খেলব", table, rules)[0]
    assert (a.root, a.tense, a.persons) == ("খেল", TenseClass.SIMPLE_FUTURE, {Person("01")})
    assert a.rank == 0


def test_khaibi(table, rules):
    a = extract_root("খাইবি", table, rules)[0]
    assert a.root == "খা"
    assert a.tense is TenseClass.SIMPLE_FUTURE
    assert a.persons == {Person("10", "intimate")}


@pytest.mark.parametrize("word,root", [
    ("খেয়েছি", "খা"), ("লিখছি", "লেখ"), ("রেখেছি", "রাখ"), ("দাও", "দে"),
    ("নিবি", "নে"), ("গেলাম", "যা"), ("গিয়েছে", "যা"), ("শুনছিলাম", "শোন"),
    ("হচ্ছে", "হ"), ("খাবা", "খা"), ("য়ামু", "যা"), ("করলেক", "কর"),
])
def test_rank0_roots(table, rules, word, root):
    assert extract_root(word, table, rules)[0].root == root


def test_noun_is_unanalyzed(table, rules):
    (a,) = extract_root("কলম", table, rules)
    assert not a.analyzed
    assert a.root == "কলম" and a.suffix is None and a.tense is None and a.persons == frozenset()


def test_single_cluster_is_unanalyzed(table, rules):
    assert not extract_root("খ", table, rules)[0].analyzed


def test_ranks_are_global_and_dense(table, rules):
    analyses = extract_root("খেলছিলাম", table, rules)
    assert [a.rank for a in analyses] == list(range(len(analyses)))


def test_segmentation_failure_propagates(table, rules):
    with pytest.raises(SegmentationError):
        extract_root("িখেল", table, rules)


def test_prefix_is_stripped_first(table, rules):
    a = extract_root("প্রখেলব", table, rules, prefixes=["প্র"])[0]
    assert a.prefix == "প্র" and a.root == "খেল"


def test_table1_only_roots_are_idempotent(table, rules, lexicon):
    printed = SuffixTable([e for e in table if "src=table1" in e.comment])
    for root in lexicon:
        if printed.match(root):
            continue
        (a,) = extract_root(root, printed, rules)
        assert not a.analyzed and a.root == root


def test_shipped_table_roots_without_suffix_are_idempotent(table, rules, lexicon):
    checked = 0
    for root in lexicon:
        if table.match(root):
            continue
        checked += 1
        assert extract_root(root, table, rules)[0].root == root
    assert checked >= 20


def test_trace_replays_on_stripped_stem(table, rules):
    for word in ("খেয়েছি", "লিখছি", "গেলাম", "খাইবি", "দাও", "শুইতেছি"):
        for a in extract_root(word, table, rules):
            assert rules.replay(a.stem, a.rule_trace) == a.root


# -- compounds ------------------------------------------------------------------


def test_compound_with_light_verb(table, rules):
    first, second = analyze_compound("খেয়ে", "নিবি", table, rules)
    assert second[0].root == "নে"
    assert first[0].form == "nonfinite" and first[0].root == "খা" and first[0].rank == 0


def test_compound_without_light_verb_keeps_order(table, rules):
    first, _ = analyze_compound("খেয়ে", "খেলব", table, rules)
    assert first == extract_root("খেয়ে", table, rules)


def test_sadhu_participle(rules):
    assert nonfinite_analyses("খাইয়া", rules)[0].root == "খা"


def test_infinitive_uses_continuous_stem(rules):
    assert nonfinite_analyses("লিখতে", rules)[0].root == "লেখ"


# -- properties -------------------------------------------------------------------

bengali_words = st.text(
    st.characters(min_codepoint=0x0980, max_codepoint=0x09FF, blacklist_categories=("Cn",)),
    min_size=1, max_size=8)


@settings(max_examples=500, deadline=None)
@given(bengali_words)
def test_extract_root_terminates_and_replays(table, rules, word):
    try:
        analyses = extract_root(word, table, rules)
    except SegmentationError:
        return
    for a in analyses:
        if a.analyzed:
            assert len(a.rule_trace) <= MAX_RULE_DEPTH
            assert rules.replay(a.stem, a.rule_trace) == a.root
            assert a.root
        else:
            assert a.root == word


def test_ruleset_is_iterable_and_indexed(rules):
    assert isinstance(rules, RuleSet)
    assert rules["GA-CHA"].priority == 30
    assert all(r.id for r in rules)
