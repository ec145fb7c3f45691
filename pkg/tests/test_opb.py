import pytest

from mocosat.model import ContractError, MocoInstance, Objective, PbConstraint
from mocosat.opb import OpbParseError, parse_mo_opb, read_instance, render_mo_opb, write_instance

from conftest import small_instances

TEXT = """* #variable= 3 #constraint= 2
* a comment
min: +1 x1 +2 ~x2 ;
min: +3 x3 ;
+1 x1 +1 x2 >= 1 ;
+2 x1 -1 ~x3 = 1 ;
"""


def test_parse_example():
    inst = parse_mo_opb(TEXT)
    assert inst.n_vars == 3
    assert inst.m == 2
    assert inst.objectives[0] == Objective([(1, 1), (2, -2)])
    assert inst.constraints[0] == PbConstraint([(1, 1), (1, 2)], ">=", 1)
    assert len(inst.constraints) == 2


def test_variable_count_widened_by_use():
    assert parse_mo_opb("min: +1 x5 ;\n").n_vars == 5


def test_max_objective_is_negated():
    inst = parse_mo_opb("min: +1 x1 ;\nmax: +2 x2 ;\n")
    assert inst.evaluate((False, True)) == (0, -2)


@pytest.mark.parametrize("text, lineno", [
    ("min: +1 x1\n", 1),
    ("min: +1 x1 ;\n+1 y1 >= 1 ;\n", 2),
    ("min: +1 x1 ;\n\n+1 x1 => 1 ;\n", 3),
    ("min: +1 x1 ;\n+a x1 >= 1 ;\n", 2),
    ("min: +1 x1 ;\n+1 x1 >= b ;\n", 2),
    ("min: +1 ;\n", 1),
    ("min: +1 x0 ;\n", 1),
    ("+1 x1 >= 1 ;\n", 0),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(OpbParseError) as info:
        parse_mo_opb(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_render_is_canonical():
    inst = parse_mo_opb(TEXT)
    text = render_mo_opb(inst)
    assert text.splitlines()[1] == "min: +1 x1 +2 ~x2 ;"
    assert "\r" not in text and text.endswith(";\n")
    assert render_mo_opb(parse_mo_opb(text)) == text


def test_render_rejects_offsets():
    with pytest.raises(ContractError):
        render_mo_opb(MocoInstance(1, [], [Objective([(1, 1)], offset=2)]))


def test_round_trip_generated_corpus(tmp_path):
    for i, inst in enumerate(small_instances(40, max_vars=12, seed=51)):
        path = tmp_path / f"i{i}.opb"
        write_instance(inst, path)
        back = read_instance(path)
        assert back.n_vars == inst.n_vars
        assert back.objectives == inst.objectives
        assert back.constraints == inst.constraints
