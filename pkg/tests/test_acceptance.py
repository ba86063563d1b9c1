"""Acceptance checks, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a pass/fail line per
criterion in the terminal summary.
"""

import itertools
import json
import random
import string
import warnings
from datetime import date

import pytest

from builders import (
    FIX_A_PATH,
    GOLDEN,
    MUTATION_SUBJECTS,
    R,
    ORACLE_STEPS,
    all_dates,
    fix_a,
    mutated_fix_a,
    nested_loop_following_scheme,
    oracle_due,
    random_graph,
    random_pattern,
    random_schedule_fixture,
    random_statement,
    random_statements,
    scan_catalogs_describing,
    scan_catalogs_with_schema,
    scan_match,
)
from mdm_registry import cli
from mdm_registry.conformance import rule_catalog, validate
from mdm_registry.graph import (
    Graph,
    Literal,
    catalogs_describing,
    catalogs_following_scheme,
    catalogs_with_schema,
    load_store,
    sort_key,
)
from mdm_registry.interchange import AccrualWarning, expand_accrual, export_json, parse_triples, serialize_canonical
from mdm_registry.maintenance import (
    ALWAYS,
    NEVER,
    NOT_DUE,
    DueItem,
    LogEntry,
    MaintenanceLog,
    add_period,
    due_functions,
    next_due,
    zachman_matrix,
)
from mdm_registry.vocabulary import get_vocabulary, is_member, terms_of

criterion = pytest.mark.criterion

FUNCTION_TYPES = [
    "Accrual",
    "Deletion",
    "Modification",
    "Transformation",
    "Reporting",
    "Export",
    "Mapping",
    "Migration",
    "Exposure",
    "ActivationDeactivation",
]


@criterion(1, "vocabulary fidelity")
def test_vocabulary_fidelity():
    assert [t.local for t in terms_of("MDMFunctionType")] == FUNCTION_TYPES
    assert {t.local for t in terms_of("MDMCollType")} == {"Legacy", "Storage", "Delivery"}
    assert len(terms_of("MDMCollType")) == 3

    rng = random.Random(20040)
    alphabet = string.ascii_letters + string.digits + "-_ :"
    tokens = set()
    while len(tokens) < 100:
        token = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 16)))
        if all(token not in get_vocabulary(v).locals for v in ("MDMFunctionType", "MDMCollType")):
            tokens.add(token)

    for vocab_id in ("CLDType", "MDMCollType", "MDMFunctionType", "MDMPeriodicity"):
        listed = {t.local for t in terms_of(vocab_id)}
        for term in listed:
            assert is_member(vocab_id, term)
        for token in tokens:
            assert is_member(vocab_id, token) == (token in listed), (vocab_id, token)


@criterion(2, "model fidelity fixture")
def test_model_fidelity_fixture():
    g = fix_a()
    assert catalogs_describing(g, "gen:collA") == [R("gen:catB")]
    assert set(g.objects("gen:catB", "dc:type")) == {R("cldtype:Catalogue"), R("mdm:Storage")}
    assert catalogs_following_scheme(g, Literal("DCMES")) == [R("gen:catB")]
    (function,) = g.objects("gen:catB", "mdm:maintenanceFunction")
    for predicate in (
        "mdm:maintPeriodicity",
        "dcterms:isReferencedBy",
        "mdm:isEngagedVia",
        "mdm:administrator",
        "mdm:contact",
    ):
        assert g.objects(function, predicate), predicate

    report = validate(g)
    assert report.counts["error"] == 0
    assert report.counts["warning"] == 0
    assert zachman_matrix(g, "gen:catB").completeness == 1.0


@criterion(3, "rule catalog coverage")
def test_rule_catalog_coverage():
    severity = {r.rule_id: r.severity for r in rule_catalog()}
    passed = []
    for rule_id in sorted(severity):
        findings = validate(mutated_fix_a(rule_id)).findings
        got = [(f.rule_id, f.severity, f.subject.curie) for f in findings]
        if got == [(rule_id, severity[rule_id], MUTATION_SUBJECTS[rule_id])]:
            passed.append(rule_id)
    assert len(passed) == 11, f"{len(passed)}/11 seeded violations detected"


@criterion(4, "query/oracle equivalence")
def test_query_oracle_equivalence():
    for seed in range(100):
        rng = random.Random(seed)
        g = random_graph(rng, max_size=200)
        assert len(g) <= 200
        statements = set(g)
        patterns = [random_pattern(rng) for _ in range(10)] + [(None, None, None)]
        for s, p, o in patterns:
            assert g.statements_matching(s, p, o) == sorted(scan_match(statements, s, p, o), key=sort_key)
        probes = [random_statement(rng) for _ in range(5)] + list(itertools.islice(statements, 5))
        for probe in probes:
            assert catalogs_describing(g, probe.subject) == scan_catalogs_describing(statements, probe.subject)
            for node in (probe.subject, probe.object):
                assert catalogs_with_schema(g, node) == scan_catalogs_with_schema(statements, node)
                assert catalogs_following_scheme(g, node) == nested_loop_following_scheme(statements, node)


@criterion(5, "calendar oracle")
def test_calendar_oracle():
    assert add_period(date(2004, 1, 31), "Monthly") == date(2004, 2, 29)
    assert add_period(date(2004, 2, 29), "Annual") == date(2005, 2, 28)
    assert add_period(date(2004, 2, 29), "Biennial") == date(2006, 2, 28)
    assert add_period(date(2003, 2, 28), "Annual") == date(2004, 2, 28)

    cases = 0
    for term, oracle in ORACLE_STEPS.items():
        for d in all_dates():
            assert add_period(d, term) == oracle(d), (d, term)
            cases += 1
    assert cases > 90_000


def _single_function(term):
    g = Graph()
    g.assert_statement("gen:cat", "dc:type", "cldtype:Catalogue")
    g.assert_statement("gen:cat", "mdm:maintenanceFunction", "gen:fn")
    g.assert_statement("gen:fn", "dc:type", "mdm:Export")
    g.assert_statement("gen:fn", "mdm:maintPeriodicity", "mdm:" + term)
    return g


@criterion(6, "scheduler behavior")
def test_scheduler_behavior():
    as_of = date(2004, 9, 20)
    monthly_and_longer = ["Monthly", "Quarterly", "Semiannual", "Annual", "Biennial"]
    for term in ["Daily", "Weekly", "Biweekly"] + monthly_and_longer:
        g = _single_function(term)
        never_run = next_due(g, MaintenanceLog(), "gen:fn", as_of)
        assert isinstance(never_run, DueItem) and never_run.due_on == as_of

    for term in monthly_and_longer:
        g = _single_function(term)
        log = MaintenanceLog([LogEntry("gen:fn", "2004-09-20T08:00:00Z", "success")])
        assert next_due(g, log, "gen:fn", as_of) is NOT_DUE

    g = _single_function("Monthly")
    log = MaintenanceLog([LogEntry("gen:fn", "2004-07-01T08:00:00Z", "success")])
    before = next_due(g, log, "gen:fn", as_of)
    log.record(LogEntry("gen:fn", "2004-09-19T08:00:00Z", "failure"))
    after = next_due(g, log, "gen:fn", as_of)
    assert before == after
    assert after.due_on == date(2004, 8, 1)

    assert next_due(_single_function("Continuous"), MaintenanceLog(), "gen:fn", as_of).due_on is ALWAYS
    assert next_due(_single_function("Irregular"), MaintenanceLog(), "gen:fn", as_of) is NEVER

    for seed in range(200):
        rng = random.Random(seed)
        g, log = random_schedule_fixture(rng)
        as_of = date(2004, 1, 1) + (date(2006, 6, 1) - date(2004, 1, 1)) * rng.random()
        expected = []
        for catalog, function in sorted(
            {(x.subject, x.object) for x in g.statements_matching(None, "mdm:maintenanceFunction", None)},
            key=lambda p: (p[0].curie, p[1].curie),
        ):
            result = next_due(g, log, function, as_of, catalog=catalog)
            oracle = oracle_due(g, log, function, as_of)
            if isinstance(result, DueItem):
                expected.append(result)
                assert ("always" if result.due_on is ALWAYS else result.due_on) == oracle
            else:
                assert result.value == oracle
        assert due_functions(g, log, as_of) == expected


@criterion(7, "round-trip and determinism")
def test_round_trip_and_determinism():
    for seed in range(100):
        rng = random.Random(seed)
        statements = random_statements(rng, 200)
        text = serialize_canonical(statements)
        out = parse_triples(text)
        assert out.errors == []
        assert set(out.statements) == set(statements)
        assert serialize_canonical(out.statements) == text

        shuffled = list(statements)
        rng.shuffle(shuffled)
        assert serialize_canonical(shuffled) == text
        assert export_json(Graph(shuffled)) == export_json(Graph(statements)) == export_json(Graph(statements))

    g = fix_a()
    assert serialize_canonical(g).encode("utf-8") == (GOLDEN / "fix_a.nt").read_bytes()
    assert export_json(g).encode("utf-8") == (GOLDEN / "fix_a.json").read_bytes()


@criterion(8, "accrual expansion")
def test_accrual_expansion():
    g = Graph()
    g.assert_statement("gen:catX", "dc:type", "cldtype:Catalogue")
    g.assert_statement("gen:catX", "dcterms:accrualPeriodicity", Literal("Monthly"))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        expand_accrual(g)
    functions = g.objects("gen:catX", "mdm:maintenanceFunction")
    accrual = [f for f in functions if R("mdm:Accrual") in g.objects(f, "dc:type")]
    assert len(accrual) == 1
    assert g.objects(accrual[0], "mdm:maintPeriodicity") == [R("mdm:Monthly")]

    snapshot = g.copy()
    assert expand_accrual(g) == []
    assert g == snapshot

    g = Graph()
    g.assert_statement("gen:catY", "dc:type", "cldtype:Catalogue")
    g.assert_statement("gen:catY", "dcterms:accrualPeriodicity", Literal("every so often"))
    with pytest.warns(AccrualWarning):
        added = expand_accrual(g)
    assert added
    assert g.statements_matching(None, "mdm:maintPeriodicity", None) == []


def _exit_codes(root):
    store = str(root / "store")

    def mdm(*args):
        return cli.run(["--store", store, *args])

    codes = {}
    codes["missing store"] = (mdm("validate"), 3)
    codes["init"] = (mdm("init"), 0)
    codes["import"] = (mdm("import", str(FIX_A_PATH)), 0)
    codes["validate clean"] = (mdm("validate"), 0)
    codes["due"] = (mdm("due", "--as-of", "2004-09-20"), 0)
    codes["due --fail-if-due"] = (mdm("due", "--as-of", "2004-09-20", "--fail-if-due"), 1)
    codes["unknown command"] = (mdm("frobnicate"), 2)
    codes["bad date"] = (mdm("due", "--as-of", "20-09-2004"), 2)
    codes["unknown vocabulary"] = (mdm("vocab", "Nope"), 2)
    codes["matrix non-catalog"] = (mdm("matrix", "gen:collA"), 2)
    bad = root / "bad.nt"
    bad.write_text("gen:a dc:type foo:Bar .\n", encoding="utf-8")
    codes["import parse error"] = (mdm("import", str(bad)), 3)
    codes["import missing file"] = (mdm("import", str(root / "absent.nt")), 3)
    codes["bad timestamp"] = (mdm("log", "gen:mf1", "2004-02-30T00:00:00Z", "success"), 3)
    codes["retract type"] = (mdm("retract", "gen:catB", "dc:type", "cldtype:Catalogue"), 0)
    codes["validate errors"] = (mdm("validate"), 1)
    return codes


@criterion(9, "CLI contract")
def test_cli_contract(tmp_path, capsys):
    codes = _exit_codes(tmp_path)
    wrong = {name: got for name, (got, want) in codes.items() if got != want}
    assert not wrong, wrong

    source = tmp_path / "source"
    assert cli.run(["--store", str(source), "init"]) == 0
    assert cli.run(["--store", str(source), "import", str(FIX_A_PATH)]) == 0
    capsys.readouterr()
    assert cli.run(["--store", str(source), "export"]) == 0
    dump = tmp_path / "dump.nt"
    dump.write_text(capsys.readouterr().out, encoding="utf-8")
    fresh = tmp_path / "fresh"
    assert cli.run(["--store", str(fresh), "init"]) == 0
    assert cli.run(["--store", str(fresh), "import", str(dump)]) == 0
    assert load_store(fresh / "graph.nt") == load_store(source / "graph.nt") == fix_a()

    capsys.readouterr()
    assert cli.run(["--store", str(fresh), "export", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads(export_json(fix_a()))
