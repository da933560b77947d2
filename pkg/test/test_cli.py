import json
import os

import pytest

from app.cli import (EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, EXIT_PARSE, EXIT_VERIFY_FAILED, RunConfig,
                     parse_criterion, parse_exports, parse_selector, run_generate, run_slice,
                     run_verify, verify_slice)
from app.formats import parse_pnml, read_pnml, write_pnml
from app.models.exceptions import BranchBudgetExceeded, ConfigurationError, UnknownProperty
from app.models.net import (Algorithm, MarkedPetriNet, Marking, NetSizes, SliceResult,
                            SlicingCriterion, make_net, slice_of)
from app.properties import PropertyId
from app.slicing import run_algorithm
from main import main, with_default_command


@pytest.fixture
def two_cycles_file(tmp_path):
    """Two cycles through the marked place a, written as PNML"""
    net = make_net(['a', 'b', 'c'], ['t1', 't2', 't3', 't4'],
                   [('a', 't1'), ('t1', 'b'), ('b', 't2'), ('t2', 'a'),
                    ('a', 't3'), ('t3', 'c'), ('c', 't4'), ('t4', 'a')], name='two_cycles')
    path = tmp_path / 'two_cycles.pnml'
    path.write_bytes(write_pnml(MarkedPetriNet(net, Marking({'a': 1}))))
    return str(path)


def report_lines(capsys):
    return capsys.readouterr().out.splitlines()


class TestParsing:
    def test_criterion(self):
        """Test ids are trimmed and de-duplicated in order"""
        assert parse_criterion(' P6 , P9,P6 ') == ('P6', 'P9')
        assert parse_criterion('  ') == ()

    def test_criterion_empty_piece(self):
        """Test an empty id between commas"""
        with pytest.raises(ConfigurationError):
            parse_criterion('a,,b')

    def test_selector(self):
        """Test algorithms by name or index, otherwise a property list"""
        assert parse_selector('2') == (Algorithm.MAXIMAL, ())
        assert parse_selector('yu') == (Algorithm.YU, ())
        assert parse_selector('pure, k_bounded(3)') == \
            (None, (PropertyId('pure'), PropertyId('k_bounded', 3)))
        assert parse_selector(None) == (None, ())

    def test_selector_unknown(self):
        """Test a name that is neither algorithm nor property"""
        with pytest.raises(UnknownProperty):
            parse_selector('fastest')

    def test_exports(self):
        """Test export names are normalised"""
        assert parse_exports('LoLA, apt,lola') == ('lola', 'apt')
        assert parse_exports(None) == ()


class TestRunConfig:
    def test_all_algorithms_by_default(self):
        """Test every algorithm runs without a selector"""
        assert RunConfig('n.pnml', ('p',)).algorithms == list(Algorithm)
        assert RunConfig('n.pnml', ('p',), Algorithm.YU).algorithms == [Algorithm.YU]

    @pytest.mark.parametrize('kwargs', [
        {'criterion': ()},
        {'criterion': ('p',), 'algorithm': Algorithm.YU, 'properties': (PropertyId('pure'),)},
        {'criterion': ('p',), 'exports': ('pdf',)},
    ])
    def test_invalid(self, kwargs):
        """Test contradictory or empty options"""
        with pytest.raises(ConfigurationError):
            RunConfig('n.pnml', **kwargs)


class TestRunSlice:
    def test_all_algorithms(self, fixture_file, tmp_path, capsys):
        """Test the report of every algorithm on NetB"""
        cfg = RunConfig(fixture_file('NetB'), ('p3',), output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_OK
        lines = report_lines(capsys)
        assert lines[0] == 'Petri net named NetB successfully read.'
        assert lines[1] == 'Slicing criterion: [p3]'
        assert [line.split('.-')[0] for line in lines[2:]] == ['1', '2', '3', '4', '5']
        totals = [line.rsplit('Reduction: ', 1)[1] for line in lines[2:]]
        assert totals == ['40.00 %', '40.00 %', '0.00 %', '40.00 %', '0.00 %']
        for index in range(1, 6):
            assert os.path.exists(tmp_path / f"NetB_{index}.pnml")
            assert os.path.exists(tmp_path / f"NetB_{index}.dot")

    @pytest.mark.parametrize("name, place", [("NetB", "p3"), ("NetDead", "p2")])
    def test_written_slices_reparse(self, fixture_file, tmp_path, name, place):
        """Test every written slice document reads back as the computed slice"""
        cfg = RunConfig(fixture_file(name), (place,), output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_OK
        s = read_pnml(fixture_file(name))
        for algorithm in Algorithm:
            expected = run_algorithm(algorithm, s, {place}).subnet
            data = (tmp_path / f"{name}_{algorithm.index}.pnml").read_bytes()
            written = parse_pnml(data, allow_empty=True)
            assert written.net.places == expected.net.places, algorithm
            assert written.net.transitions == expected.net.transitions, algorithm
            assert written.net.arcs == expected.net.arcs, algorithm
            assert written.marking.nonzero() == expected.marking.nonzero(), algorithm

    def test_single_algorithm(self, fixture_file, tmp_path, capsys):
        """Test one selected algorithm"""
        cfg = RunConfig(fixture_file('NetB'), ('p3',), Algorithm.MAXIMAL, output_dir=str(tmp_path),
                        exports=('lola', 'apt'))
        assert run_slice(cfg) == EXIT_OK
        assert report_lines(capsys)[2] == '2.- Maximal dynamic slice -> Reduction: 40.00 %'
        assert sorted(os.listdir(tmp_path)) == ['NetB_2.apt', 'NetB_2.dot', 'NetB_2.lola',
                                                'NetB_2.pnml']

    def test_json_report(self, fixture_file, tmp_path, capsys):
        """Test the JSON report of a dead net"""
        cfg = RunConfig(fixture_file('NetDead'), ('p2',), Algorithm.MINIMAL, json=True,
                        output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_OK
        path = tmp_path / 'NetDead.json'
        assert report_lines(capsys)[-1] == f"JSON report written to {path}"
        report = json.loads(path.read_text())
        assert report['net'] == {'name': 'NetDead', 'places': 2, 'transitions': 1, 'arcs': 2,
                                 'tokens': 0}
        assert report['criterion'] == ['p2']
        result, = report['results']
        assert result['algorithm'] == 'minimal'
        assert result['reduction_pct']['total'] == 100.0
        assert result['sizes_after']['places'] == 0
        assert result['warnings']

    def test_property_filter(self, two_cycles_file, tmp_path, capsys):
        """Test slices losing strong connectivity are not reported"""
        cfg = RunConfig(two_cycles_file, ('b',), properties=(PropertyId('strongly_connected'),),
                        json=True, output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_OK
        lines = report_lines(capsys)
        assert [line.split('.-')[0] for line in lines[2:-1]] == ['2', '3', '5']
        report = json.loads((tmp_path / 'two_cycles.json').read_text())
        assert report['properties'] == ['strongly_connected']
        assert report['results'][0]['properties'][0]['kept'] is True

    def test_unknown_place(self, fixture_file, tmp_path, capsys):
        """Test a criterion place missing from the net"""
        cfg = RunConfig(fixture_file('NetB'), ('p9',), output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_CONFIG
        assert 'p9' in capsys.readouterr().err

    def test_unreadable_file(self, tmp_path):
        """Test a missing input file"""
        cfg = RunConfig(str(tmp_path / 'missing.pnml'), ('p',), output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_PARSE

    def test_budget_exceeded(self, fixture_file, tmp_path, capsys, mocker):
        """Test an exhausted budget is reported while the other algorithms still run"""
        def flaky(algorithm, s, q):
            if algorithm is Algorithm.MINIMAL:
                raise BranchBudgetExceeded(5)
            return run_algorithm(algorithm, s, q)

        mocker.patch('app.cli.commands.run_algorithm', side_effect=flaky)
        cfg = RunConfig(fixture_file('NetB'), ('p3',), output_dir=str(tmp_path))
        assert run_slice(cfg) == EXIT_BUDGET
        lines = report_lines(capsys)
        assert lines[2].startswith('1.- Minimal dynamic slice -> ')
        assert 'budget of 5' in lines[2]
        assert len(lines) == 7


class TestVerify:
    def test_maximal(self, net_b):
        """Test the maximal slicer passes validity and maximality"""
        verdict = verify_slice(net_b, ['p3'], Algorithm.MAXIMAL)
        assert verdict.passed
        assert verdict.lines() == ['PASS valid', 'PASS maximal']

    def test_minimal(self, net_b):
        """Test the minimal slicer matches the brute-force minimum"""
        verdict = verify_slice(net_b, ['p3'], Algorithm.MINIMAL)
        assert verdict.passed
        assert verdict.lines()[1] == 'PASS minimal-size-match: size 3, brute-force minimum 3'

    def test_minimal_without_sequences(self, net_dead):
        """Test the size check passes trivially on a dead net"""
        assert verify_slice(net_dead, ['p2'], Algorithm.MINIMAL).passed

    def test_failure(self, net_b, mocker):
        """Test a wrong slice fails with a witness"""
        sliced = slice_of(net_b, {'p2', 't2', 'p3'})
        wrong = SliceResult(sliced, Algorithm.MAXIMAL, SlicingCriterion(net_b.marking, {'p3'}),
                            NetSizes.of(net_b), NetSizes.of(sliced))
        mocker.patch('app.cli.commands.run_algorithm', return_value=wrong)
        verdict = verify_slice(net_b, ['p3'], Algorithm.MAXIMAL)
        assert not verdict.passed
        assert verdict.lines()[0] == "FAIL valid: no subsequence of ['t1'] fires"

    def test_run_verify(self, fixture_file, capsys):
        """Test the verify command output and exit codes"""
        assert run_verify(fixture_file('NetB'), ['p3'], Algorithm.YU) == EXIT_OK
        assert report_lines(capsys)[1] == 'PASS valid'
        assert run_verify(fixture_file('NetB'), ['p3'], Algorithm.YU, ceiling=4) == EXIT_BUDGET

    def test_run_verify_failed(self, fixture_file, mocker, net_b):
        """Test a failed check exits with its own code"""
        sliced = slice_of(net_b, {'p3'})
        wrong = SliceResult(sliced, Algorithm.MAXIMAL, SlicingCriterion(net_b.marking, {'p3'}),
                            NetSizes.of(net_b), NetSizes.of(sliced))
        mocker.patch('app.cli.commands.run_algorithm', return_value=wrong)
        assert run_verify(fixture_file('NetB'), ['p3'], Algorithm.MAXIMAL) == EXIT_VERIFY_FAILED


class TestMain:
    def test_slice(self, fixture_file, tmp_path, capsys):
        """Test the slice command end to end"""
        assert main(['slice', fixture_file('NetB'), 'p3', 'maximal', '-o', str(tmp_path)]) == 0
        assert 'Reduction: 40.00 %' in capsys.readouterr().out

    def test_bare_slice(self, fixture_file, tmp_path, capsys):
        """Test a net path as first argument runs the slice command"""
        assert main([fixture_file('NetB'), 'p3', 'maximal', '-o', str(tmp_path)]) == 0
        assert 'Reduction: 40.00 %' in capsys.readouterr().out
        assert os.path.exists(tmp_path / 'NetB_2.pnml')

    def test_commands_and_options_pass_through(self):
        """Test subcommands and leading options are left alone"""
        assert with_default_command(['verify', 'n.pnml', 'p', 'yu'])[0] == 'verify'
        assert with_default_command(['--version']) == ['--version']
        assert with_default_command(['n.pnml', 'p']) == ['slice', 'n.pnml', 'p']
        assert with_default_command([]) == []

    def test_bad_selector(self, fixture_file, tmp_path):
        """Test an unknown selector is a configuration error"""
        assert main(['slice', fixture_file('NetB'), 'p3', 'fastest', '-o', str(tmp_path)]) == 2

    def test_verify_unknown_algorithm(self, fixture_file):
        """Test verify rejects an unknown algorithm"""
        assert main(['verify', fixture_file('NetB'), 'p3', 'fastest']) == 2

    def test_generate(self, tmp_path):
        """Test the generate command"""
        assert main(['generate', str(tmp_path), '--count', '2', '--seed', '3']) == 0
        assert len(os.listdir(tmp_path)) == 2
        assert run_generate(str(tmp_path), 0, 3, 4, 4, False) == EXIT_CONFIG

    def test_bench(self, tmp_path, capsys):
        """Test the bench command on a generated corpus"""
        corpus = tmp_path / 'corpus'
        assert main(['generate', str(corpus), '--count', '2', '--max-places', '4',
                     '--max-transitions', '4']) == 0
        out = tmp_path / 'out'
        assert main(['bench', str(corpus), '--runs', '2', '--threads', '2', '-o', str(out)]) == 0
        assert f"Stats written to {out}" in capsys.readouterr().out
        assert os.path.exists(out / 'bench_stats.tsv')

    def test_unexpected_error(self, fixture_file, mocker):
        """Test unexpected errors exit with status 1"""
        mocker.patch('main.run_slice', side_effect=RuntimeError('boom'))
        assert main(['slice', fixture_file('NetB'), 'p3']) == 1
