import pytest

from app.models.exceptions import (ExplosionCap, InvalidSequence, NotEnabled, NotEnabledAt,
                                   UnknownTransition)
from app.models.net import MarkedPetriNet, Marking, make_net
from app.semantics import (can_fire, enabled_transitions, find_increasing_sequences, fire,
                           fire_sequence, fire_tokens, first_increasing_sequence, is_enabled,
                           is_increasing, project_subsequence, raised_places,
                           reachability_graph)


@pytest.fixture
def producer_net():
    """A source transition feeding p forever"""
    net = make_net(['p'], ['t'], [('t', 'p')], name='producer')
    return MarkedPetriNet(net, Marking())


class TestFiring:
    def test_enabled(self, net_a, net_dead):
        """Test enabledness against the token count"""
        assert is_enabled(net_a, 't1') is True
        assert is_enabled(net_dead, 't1') is False

    def test_weighted_enabledness(self):
        """Test a weight-2 arc needs two tokens"""
        net = make_net(['p'], ['t'], [('p', 't', 2)])
        assert not is_enabled(MarkedPetriNet(net, Marking({'p': 1})), 't')
        assert is_enabled(MarkedPetriNet(net, Marking({'p': 2})), 't')

    def test_unknown_transition(self, net_a):
        """Test an unknown transition is reported"""
        with pytest.raises(UnknownTransition):
            is_enabled(net_a, 't9')

    def test_fire(self, net_a, net_b):
        """Test firing moves tokens"""
        assert fire(net_a, 't1') == Marking({'p1': 0, 'p2': 1})
        assert fire(net_b, 't1') == Marking({'p3': 1})

    def test_fire_not_enabled(self, net_dead):
        """Test firing a disabled transition"""
        with pytest.raises(NotEnabled):
            fire(net_dead, 't1')

    def test_enabled_transitions_sorted(self):
        """Test enabled transitions come in id order"""
        net = make_net(['p'], ['tb', 'ta'], [('p', 'tb'), ('p', 'ta')])
        assert enabled_transitions(MarkedPetriNet(net, Marking({'p': 1}))) == ['ta', 'tb']

    def test_token_mappings(self, net_b):
        """Test firing on plain token mappings"""
        assert can_fire(net_b.net, {'p1': 1}, 't1')
        assert not can_fire(net_b.net, {'p1': 1}, 't2')
        assert fire_tokens(net_b.net, {'p1': 1}, 't1') == {'p1': 0, 'p3': 1}

    def test_raised_places(self):
        """Test only places whose count strictly grows are raised"""
        net = make_net(['a', 'b', 'c'], ['t'],
                       [('a', 't'), ('t', 'a'), ('t', 'b', 2), ('t', 'c')])
        assert raised_places(net, 't', {'a', 'b', 'c'}) == ['b', 'c']
        assert raised_places(net, 't', {'a'}) == []


class TestSequences:
    def test_empty_sequence(self, net_a):
        """Test the empty sequence reaches nothing"""
        assert fire_sequence(net_a, []) == []

    def test_sequence(self, net_a):
        """Test the markings along a sequence"""
        assert fire_sequence(net_a, ['t1']) == [Marking({'p2': 1})]

    def test_not_enabled_at(self, net_a):
        """Test the failing index is reported"""
        with pytest.raises(NotEnabledAt) as info:
            fire_sequence(net_a, ['t1', 't1'])
        assert info.value.index == 1

    def test_is_increasing(self, net_a, net_b):
        """Test the last step must raise a criterion place"""
        assert is_increasing(net_a, ['t1'], {'p2'}) is True
        assert is_increasing(net_a, [], {'p2'}) is False
        assert is_increasing(net_b, ['t1'], {'p1'}) is False

    def test_is_increasing_invalid(self, net_a):
        """Test an unfireable sequence is an error, not a false verdict"""
        with pytest.raises(InvalidSequence):
            is_increasing(net_a, ['t1', 't1'], {'p2'})

    def test_project_subsequence(self):
        """Test projection keeps order and multiplicity"""
        assert project_subsequence(['t1', 't2', 't1', 't3'], {'t1', 't3'}) == ('t1', 't1', 't3')


class TestFindIncreasingSequences:
    def test_net_a(self, net_a):
        """Test the only increasing sequence of NetA"""
        assert find_increasing_sequences(net_a, {'p2'}, 3) == [('t1',)]

    def test_dead_net(self, net_dead):
        """Test a dead net has none"""
        assert find_increasing_sequences(net_dead, {'p2'}, 5) == []

    def test_net_b_length_one(self, net_b):
        """Test t2 is never enabled in NetB"""
        assert find_increasing_sequences(net_b, {'p3'}, 1) == [('t1',)]

    def test_lexicographic_order(self, producer_net):
        """Test every prefix of a pumping sequence is reported in order"""
        assert find_increasing_sequences(producer_net, {'p'}, 3) == \
            [('t',), ('t', 't'), ('t', 't', 't')]

    def test_explosion_cap(self, producer_net):
        """Test the node budget stops the enumeration"""
        with pytest.raises(ExplosionCap):
            find_increasing_sequences(producer_net, {'p'}, 10, node_budget=5)

    def test_negative_length(self, net_a):
        """Test a negative bound is rejected"""
        with pytest.raises(ValueError):
            find_increasing_sequences(net_a, {'p2'}, -1)


class TestFirstIncreasingSequence:
    def test_found(self, net_b):
        """Test the first witness in lexicographic order"""
        assert first_increasing_sequence(net_b, {'p3'}, 4) == ('t1',)

    def test_needs_two_steps(self):
        """Test a witness whose first step does not touch the criterion"""
        net = make_net(['a', 'b', 'c'], ['t1', 't2'],
                       [('a', 't1'), ('t1', 'b'), ('b', 't2'), ('t2', 'c')])
        s = MarkedPetriNet(net, Marking({'a': 1}))
        assert first_increasing_sequence(s, {'c'}, 1) is None
        assert first_increasing_sequence(s, {'c'}, 2) == ('t1', 't2')

    def test_empty_criterion(self, net_a):
        """Test nothing can increase an empty criterion"""
        assert first_increasing_sequence(net_a, set(), 5) is None


class TestReachabilityGraph:
    def test_net_a(self, net_a):
        """Test the two markings of NetA"""
        graph = reachability_graph(net_a)
        assert len(graph.states) == 2
        assert len(graph.edges) == 1
        assert graph.complete

    def test_dead_net(self, net_dead):
        """Test a dead net has a single marking"""
        graph = reachability_graph(net_dead)
        assert len(graph.states) == 1
        assert graph.edges == frozenset()
        assert graph.complete

    def test_state_cap(self, producer_net):
        """Test an unbounded net stops at the cap"""
        graph = reachability_graph(producer_net, state_cap=10)
        assert not graph.complete
        assert len(graph.states) == 10

    def test_path_to(self, net_a):
        """Test the breadth-first path to a marking"""
        graph = reachability_graph(net_a)
        assert graph.path_to(Marking({'p2': 1})) == ['t1']
        assert graph.path_to(graph.initial) == []
