import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.formats import (EXPORTERS, export_apt, export_dot, export_lola, parse_pnml, read_pnml,
                         write_pnml)
from app.formats.naming import transliterate
from app.models.exceptions import (DuplicateArc, EmptyNet, FormatError, MalformedXml, NotAPtNet,
                                   UnsupportedName)
from app.models.net import MarkedPetriNet, Marking, make_net

PT = 'http://www.pnml.org/version-2009/grammar/ptnet'


def document(body: str, net_type: str = PT) -> bytes:
    type_attr = f' type="{net_type}"' if net_type else ''
    return (f'<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">'
            f'<net id="n1"{type_attr}>{body}</net></pnml>').encode()


@st.composite
def marked_nets(draw):
    """Small marked nets with weights and tokens"""
    places = [f"p{i}" for i in range(draw(st.integers(min_value=1, max_value=4)))]
    transitions = [f"t{i}" for i in range(draw(st.integers(min_value=0, max_value=4)))]
    pairs = [(p, t) for p in places for t in transitions] + \
            [(t, p) for p in places for t in transitions]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    arcs = [(a, b, draw(st.integers(min_value=1, max_value=3))) for a, b in chosen]
    tokens = {p: draw(st.integers(min_value=0, max_value=3)) for p in places}
    return MarkedPetriNet(make_net(places, transitions, arcs, name='drawn'), Marking(tokens))


class TestParsePnml:
    def test_fixture(self, fixture_file):
        """Test the NetB fixture is read with its marking"""
        s = read_pnml(fixture_file('NetB'))
        assert s.name == 'NetB'
        assert s.net.places == {'p1', 'p2', 'p3'}
        assert s.net.transitions == {'t1', 't2'}
        assert len(s.net.arcs) == 4
        assert s.marking == Marking({'p1': 1})

    def test_pages_flattened(self):
        """Test nodes on nested pages are collected"""
        s = parse_pnml(document(
            '<page id="g0"><place id="p"><initialMarking><text>2</text></initialMarking>'
            '</place><page id="g1"><transition id="t"/>'
            '<arc id="a" source="p" target="t"><inscription><text>3</text></inscription></arc>'
            '</page></page>'))
        assert s.net.weight('p', 't') == 3
        assert s.marking['p'] == 2

    def test_unknown_elements_dropped(self):
        """Test tool-specific elements and graphics are ignored"""
        s = parse_pnml(document(
            '<page id="g"><place id="p"><graphics/></place>'
            '<toolspecific tool="x" version="1"/></page>'))
        assert s.net.places == {'p'}

    def test_name_falls_back_to_id(self):
        """Test a net without a name element is named by its id"""
        assert parse_pnml(document('<page id="g"><place id="p"/></page>')).name == 'n1'
        named = parse_pnml(document('<name><text>Shop</text></name><place id="p"/>'))
        assert named.name == 'Shop'

    def test_missing_type(self):
        """Test an untyped net is read as a P/T net"""
        assert parse_pnml(document('<place id="p"/>', net_type='')).net.places == {'p'}

    def test_malformed(self):
        """Test broken XML"""
        with pytest.raises(MalformedXml):
            parse_pnml(b'<pnml><net')

    def test_bad_marking(self):
        """Test a non-numeric marking"""
        with pytest.raises(MalformedXml):
            parse_pnml(document('<place id="p"><initialMarking><text>x</text>'
                                '</initialMarking></place>'))

    def test_arc_without_target(self):
        """Test arcs need both ends"""
        with pytest.raises(MalformedXml):
            parse_pnml(document('<place id="p"/><arc id="a" source="p"/>'))

    def test_coloured_net(self):
        """Test nets of another type are refused"""
        with pytest.raises(NotAPtNet):
            parse_pnml(document('<place id="p"/>',
                                net_type='http://www.pnml.org/version-2009/grammar/symmetricnet'))

    def test_no_net(self):
        """Test a document without a net"""
        with pytest.raises(NotAPtNet):
            parse_pnml(b'<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml"/>')

    def test_empty_net(self):
        """Test an empty net is refused unless allowed"""
        with pytest.raises(EmptyNet):
            parse_pnml(document(''))
        assert parse_pnml(document(''), allow_empty=True).net.nodes == frozenset()

    def test_invalid_net(self):
        """Test validation errors of the net model surface unchanged"""
        with pytest.raises(DuplicateArc):
            parse_pnml(document('<place id="p"/><transition id="t"/>'
                                '<arc id="a" source="p" target="t"/>'
                                '<arc id="b" source="p" target="t"/>'))


class TestReadPnml:
    def test_missing_file(self, tmp_path):
        """Test an unreadable path"""
        with pytest.raises(FormatError):
            read_pnml(str(tmp_path / 'missing.pnml'))

    def test_named_after_file(self, tmp_path):
        """Test a net without name or id takes the file stem"""
        path = tmp_path / 'kitchen.pnml'
        path.write_bytes(b'<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">'
                         b'<net type="' + PT.encode() + b'"><place id="p"/></net></pnml>')
        assert read_pnml(str(path)).name == 'kitchen'


class TestWritePnml:
    def test_fixture_round_trip(self, fixture_file):
        """Test writing and reading the fixture keeps net and marking"""
        s = read_pnml(fixture_file('NetB'))
        again = parse_pnml(write_pnml(s))
        assert again.net == s.net
        assert again.marking == s.marking
        assert again.name == 'NetB'

    def test_canonical(self, net_b):
        """Test writing is deterministic and omits defaults"""
        data = write_pnml(net_b)
        assert data == write_pnml(parse_pnml(data))
        assert b'inscription' not in data
        assert data.count(b'initialMarking') == 2

    def test_weights_written(self):
        """Test inscriptions above one are written"""
        net = make_net(['p'], ['t'], [('p', 't', 3)], name='w')
        assert parse_pnml(write_pnml(MarkedPetriNet(net, Marking()))).net.weight('p', 't') == 3

    def test_empty_slice(self):
        """Test an empty slice can be written and read back"""
        empty = MarkedPetriNet(make_net([], [], name='empty'), Marking())
        assert parse_pnml(write_pnml(empty), allow_empty=True).net.nodes == frozenset()

    @given(marked_nets())
    def test_round_trip(self, s):
        """Test parse(write(s)) equals s"""
        again = parse_pnml(write_pnml(s))
        assert again.net == s.net
        assert again.marking == s.marking


class TestDot:
    def test_net_b(self, net_b):
        """Test places, transitions and arcs are rendered"""
        text = export_dot(net_b)
        assert text.startswith('digraph "NetB"')
        assert text.count('shape=circle') == 3
        assert text.count('shape=box') == 2
        assert '"p1" -> "t1"' in text
        assert 'fillcolor' not in text

    def test_highlight(self, net_b):
        """Test slice nodes are filled"""
        text = export_dot(net_b, highlight={'p1', 't1', 'p3'})
        assert text.count('fillcolor=lightgrey') == 3

    def test_place_label_escape(self, net_b):
        """Test place labels use the DOT line-break escape, not a raw newline"""
        text = export_dot(net_b)
        assert '"p1\\n1"' in text
        assert 'p1\n1' not in text

    def test_weight_label(self):
        """Test weights above one are labelled"""
        net = make_net(['p'], ['t'], [('p', 't', 2)], name='w')
        assert re.search(r'label="?2"?', export_dot(MarkedPetriNet(net, Marking())))


class TestLola:
    def test_net_b(self, net_b):
        """Test the LoLA rendering of NetB"""
        assert export_lola(net_b) == (
            "{ net NetB }\n\n"
            "PLACE p1, p2, p3;\n\n"
            "MARKING p1: 1;\n\n"
            "TRANSITION t1\n  CONSUME p1: 1;\n  PRODUCE p3: 1;\n\n"
            "TRANSITION t2\n  CONSUME p2: 1;\n  PRODUCE p3: 1;\n")

    def test_braces_in_name(self):
        """Test a net name cannot close the header comment early"""
        net = make_net(['p'], [], [], name='a}b{c')
        assert export_lola(MarkedPetriNet(net, Marking())).startswith("{ net a_b_c }\n")

    def test_unmarked_source(self):
        """Test empty sections stay syntactically present"""
        net = make_net(['p-1'], ['t'], [('t', 'p-1', 2)], name='src')
        text = export_lola(MarkedPetriNet(net, Marking()))
        assert "MARKING ;" in text
        assert "  CONSUME ;" in text
        assert "  PRODUCE p_1: 2;" in text


class TestApt:
    def test_net_b(self, net_b):
        """Test the APT rendering of NetB"""
        assert export_apt(net_b) == (
            '.name "NetB"\n.type LPN\n\n'
            '.places\np1\np2\np3\n\n'
            '.transitions\nt1\nt2\n\n'
            '.flows\nt1: {p1} -> {p3}\nt2: {p2} -> {p3}\n\n'
            '.initial_marking {p1}\n')

    def test_weights_and_digits(self):
        """Test weighted multisets and ids starting with a digit"""
        net = make_net(['1p'], ['t'], [('1p', 't', 2)], name='d')
        text = export_apt(MarkedPetriNet(net, Marking({'1p': 3})))
        assert "t: {2*_1p} -> {}" in text
        assert ".initial_marking {3*_1p}" in text

    def test_registry(self):
        """Test every export format is registered"""
        assert set(EXPORTERS) == {'dot', 'lola', 'apt'}


class TestTransliterate:
    def test_legal_ids_unchanged(self):
        """Test legal ids map to themselves"""
        assert transliterate(['a', 'b.c'], r'[^A-Za-z0-9_.]', 'LoLA') == {'a': 'a', 'b.c': 'b.c'}

    def test_collision(self):
        """Test two ids mapping to one name are refused"""
        with pytest.raises(UnsupportedName) as info:
            transliterate(['a-b', 'a_b'], r'[^A-Za-z0-9_]', 'APT')
        assert info.value.target == 'APT'

    def test_export_collision(self):
        """Test exporters surface the collision"""
        net = make_net(['a b', 'a_b'], [], name='clash')
        with pytest.raises(UnsupportedName):
            export_lola(MarkedPetriNet(net, Marking()))
