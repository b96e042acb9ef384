import json

import pytest

import qsgdiag.cli
from qsgdiag.cli import main, EXIT_COMPLETE, EXIT_ERROR, EXIT_INCOMPLETE
from qsgdiag.errors import ConvergenceError


def test_diagonalize_json(tmp_path, capsys):
    path = tmp_path / "A.json"
    path.write_text('{"matrix": [[[1, 0], [0, -2]], [[0, 2], [3, 0]]]}')
    output = tmp_path / "report.json"
    status = main(['diagonalize', '--input', str(path), '--seed', '3',
                   '--format', 'json', '--output', str(output), '--check-maxwell'])
    assert status == EXIT_COMPLETE
    report = json.loads(output.read_text())
    assert report['config']['seed'] == 3
    assert report['spin_half']['maxwell'] is not None
    assert capsys.readouterr().out == ""


def test_diagonalize_text_to_stdout(capsys):
    status = main(['diagonalize', '--input', '[[2, 1], [1, 2]]', '--shots', 'exact',
                   '--verbose'])
    assert status == EXIT_COMPLETE
    captured = capsys.readouterr()
    assert "Step 4" in captured.out
    assert "Measured" in captured.err
    assert "Measured" not in captured.out


def test_diagonalize_workers_and_shots(capsys):
    status = main(['diagonalize', '--input', '[[2, 1], [1, 2]]', '--shots', '1000',
                   '--workers', '2', '--format', 'json'])
    assert status == EXIT_COMPLETE
    report = json.loads(capsys.readouterr().out)
    assert report['config']['shots'] == 1000


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv('QSGDIAG_SEED', '99')
    main(['diagonalize', '--input', '[[2, 1], [1, 2]]', '--format', 'json'])
    assert json.loads(capsys.readouterr().out)['config']['seed'] == 99
    main(['diagonalize', '--input', '[[2, 1], [1, 2]]', '--format', 'json',
          '--seed', '1'])
    assert json.loads(capsys.readouterr().out)['config']['seed'] == 1


def test_incomplete_exit_status(capsys):
    with pytest.warns(UserWarning):
        status = main(['diagonalize', '--input', '[[1, 0, 0], [0, 2, 0], [0, 0, 3]]',
                       '--max-runs', '1'])
    assert status == EXIT_INCOMPLETE


@pytest.mark.parametrize("matrix", ['[[1, 1], [2, 1]]', '[[1, 2], [3, 4], [5, 6]]',
                                    '{"matrix": [[1, 2]'])
def test_invalid_input(matrix, capsys):
    status = main(['diagonalize', '--input', matrix])
    assert status == EXIT_ERROR
    assert "qsgdiag: error" in capsys.readouterr().err


def test_invalid_shots(capsys):
    with pytest.raises(SystemExit):
        main(['diagonalize', '--input', '[[2, 1], [1, 2]]', '--shots', 'some'])


def test_basis(capsys):
    assert main(['basis', '--spin', '1/2', '--format', 'json']) == EXIT_COMPLETE
    data = json.loads(capsys.readouterr().out)
    assert data['N'] == 2
    assert len(data['elements']) == 4
    assert data['elements'][3]['matrix'] == [[[1.0, 0.0], [0.0, 0.0]],
                                             [[0.0, 0.0], [-1.0, 0.0]]]


def test_basis_invalid_spin(capsys):
    assert main(['basis', '--spin', '1/3']) == EXIT_ERROR


def test_convergence_failure_exit_status(monkeypatch, capsys):
    def fail(*args, **kwargs):
        raise ConvergenceError("Jacobi sweeps did not converge.")
    monkeypatch.setattr(qsgdiag.cli, 'diagonalize_quantum', fail)
    assert main(['diagonalize', '--input', '[[2, 1], [1, 2]]']) == EXIT_ERROR
    assert "qsgdiag: error: Jacobi sweeps" in capsys.readouterr().err
