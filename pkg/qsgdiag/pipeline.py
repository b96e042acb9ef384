# -*- coding: utf-8 -*-
"""
The five steps of the quantum diagonalization of a hermitean matrix, from
reading the matrix to the final report.

    1. Expand ``A`` in the multipole basis of a spin ``s = (N - 1) / 2``.
    2. Read the expansion as a spin observable ``H_A(S)``.
    3. Tune the apparatus so that beams in the eigenstates of ``A`` separate.
    4. Repeat the measurement on unpolarized beams until every outcome has
       been seen with probability ``1 - epsilon``.
    5. Block all but one subbeam and reconstruct the state passing through.
"""

import hashlib
import json
import os
import sys
import time
import warnings

import numpy as np
from .apparatus import (swiftfield, fieldprofiles, check_maxwell, beam_force,
                        spin_half_levels, exact_spin_half_levels,
                        swift_beam_forces)
from .errors import DimensionError
from .measurement import (oracle_spectrum, stoppingrule, run_experiment,
                          cluster_outcomes, missing_probability, substream)
from .multipoles import hermitianmatrix
from .observable import (physicalconstants, to_observable, field_for_spin_half,
                         zeeman_levels, shift_relation, closed_form_2x2)
from .tomography import (postselect, estimate_expectations, reconstruct_state,
                         eigenvector_residual, calculate_eigenstate)

__all__ = ['verify_config', 'load_matrix', 'diagonalize_quantum',
           'emit_report', 'format_text']

SCHEMA = 'qsgdiag/1'


# -- Configuration. -- #

def verify_config(config=None):
    """
    Check the run configuration and fill in defaults for missing keys.

    The seed is taken from ``config['seed']``, else from the environment
    variable ``QSGDIAG_SEED``, else set to 0.

    Args:
        config (optional[dict]): Run configuration, modified in place.

    Returns:
        dict: The completed configuration.
    """
    config = {} if config is None else config

    # Random streams.

    seed = config.pop('seed', None)
    if seed is None:
        seed = os.environ.get('QSGDIAG_SEED', 0)
    try:
        seed = int(seed)
    except (TypeError, ValueError):
        raise ValueError("`seed` must be an integer, got {!r}.".format(seed))
    if not 0 <= seed < 2**64:
        raise ValueError("`seed` must be an unsigned 64-bit integer.")
    config['seed'] = seed

    # Stopping rule and readout.

    config['epsilon'] = float(config.pop('epsilon', 1e-6))
    if not 0.0 < config['epsilon'] < 1.0:
        raise ValueError("`epsilon` must lie in (0, 1).")
    config['max_runs'] = int(config.pop('max_runs', 10**6))
    if config['max_runs'] < 1:
        raise ValueError("`max_runs` must be positive.")
    config['noise_sigma'] = float(config.pop('noise_sigma', 0.0))
    config['cluster_tol'] = float(config.pop('cluster_tol', 0.0))
    config['degeneracy_tol'] = float(config.pop('degeneracy_tol', 1e-9))
    for key in ['noise_sigma', 'cluster_tol', 'degeneracy_tol']:
        if not config[key] >= 0.0:
            raise ValueError("`{}` must be non-negative.".format(key))

    # Tomography.

    shots = config.pop('shots', 0)
    shots = 0 if shots == 'exact' else shots
    try:
        config['shots'] = int(shots)
    except (TypeError, ValueError):
        raise ValueError("`shots` must be an integer or 'exact'.")
    if config['shots'] < 0:
        raise ValueError("`shots` must be non-negative.")
    config['tomography'] = config.pop('tomography', 'experiment')
    if config['tomography'] not in ['experiment', 'calculate']:
        raise ValueError("`tomography` must be 'experiment' or 'calculate'.")

    # Apparatus.

    constants = physicalconstants(config.pop('g', 1.0), config.pop('mu_B', 1.0),
                                  config.pop('hbar', 1.0))
    config['g'], config['mu_B'], config['hbar'] = constants
    config['fd_step'] = float(config.pop('fd_step', 1e-3))
    if not config['fd_step'] > 0.0:
        raise ValueError("`fd_step` must be positive.")
    config['gradient'] = float(config.pop('gradient', 1.0))
    if not config['gradient'] > 0.0:
        raise ValueError("`gradient` must be positive.")
    config['check_maxwell'] = bool(config.pop('check_maxwell', False))
    config['maxwell_points'] = int(config.pop('maxwell_points', 100))
    if config['maxwell_points'] < 1:
        raise ValueError("`maxwell_points` must be positive.")

    config['verbose'] = bool(config.pop('verbose', False))
    return config


# -- Input. -- #

def _entry(value, i, j):
    if isinstance(value, bool):
        raise ValueError("Entry ({:d}, {:d}) is not a number.".format(i, j))
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                    for v in value)):
        return complex(value[0], value[1])
    raise ValueError("Entry ({:d}, {:d}) must be a number or ".format(i, j)
                     + "a [re, im] pair, got {!r}.".format(value))


def load_matrix(source):
    """
    Read a hermitean matrix.

    The format is the JSON object ``{"matrix": [[[re, im], ...], ...]}``, rows
    of ``[re, im]`` pairs. Real entries may be given as plain numbers and the
    bare list of rows is accepted too.

    Args:
        source (str): Path to a file or the JSON text itself.

    Returns:
        hermitianmatrix: The validated matrix.
    """
    if os.path.isfile(source):
        with open(source, 'r') as f:
            text = f.read()
    else:
        text = source
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError("Could not parse the matrix at line "
                         + "{:d}, column {:d}: {}.".format(err.lineno, err.colno,
                                                           err.msg))
    rows = data.get('matrix', None) if isinstance(data, dict) else data
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("Expected a list of rows under `'matrix'`.")
    if len(set(len(r) for r in rows)) > 1:
        raise DimensionError("Rows differ in length.")
    if len(rows) == 0 or len(rows[0]) != len(rows):
        raise DimensionError("Matrix must be square, got "
                             + "{:d} x {:d}.".format(len(rows), len(rows[0]) if rows else 0))
    entries = [[_entry(v, i, j) for j, v in enumerate(r)] for i, r in enumerate(rows)]
    return hermitianmatrix(entries)


def _digest(A):
    return hashlib.sha256(np.ascontiguousarray(A.entries).tobytes()).hexdigest()


def _pairs(vector):
    return [[float(z.real), float(z.imag)] for z in vector]


# -- The five steps. -- #

def _spin_half(A, obs, eigenvalues, config, constants):
    """Homogeneous-field picture and Swift apparatus of a spin-1/2."""
    a, B0 = field_for_spin_half(obs)
    E_plus, E_minus = zeeman_levels(B0, constants)
    closed = closed_form_2x2(A)
    shifted = [shift_relation(E_minus, a), shift_relation(E_plus, a)]
    field = swiftfield.perpendicular(B0, config['gradient'])
    F_plus, F_minus = swift_beam_forces(field, constants, config['fd_step'])
    magnitude = 0.5 * constants.hbar * abs(constants.g * constants.mu_B)
    magnitude *= np.linalg.norm(B0)
    level_error = max(abs(e - x) for e, x in zip(
        spin_half_levels(field, np.zeros(3), constants),
        exact_spin_half_levels(field, np.zeros(3), constants)))
    harvested = sorted(eigenvalues)
    if len(harvested) == 2:
        agreement = float(max(abs(h - s) for h, s in zip(harvested, shifted)))
    else:
        agreement = None
    section = {'a': a,
               'B0': [float(b) for b in B0],
               'k': [float(k) for k in field.k],
               'levels': [float(E_minus), float(E_plus)],
               'shifted_eigenvalues': [float(v) for v in shifted],
               'closed_form': [float(closed[1]), float(closed[0])],
               'path_agreement': agreement,
               'level_error': float(level_error),
               'forces': {'plus': [float(f) for f in F_plus],
                          'minus': [float(f) for f in F_minus],
                          'expected_plus': [float(f) for f in -magnitude * field.k],
                          'expected_minus': [float(f) for f in magnitude * field.k]},
               'maxwell': None}
    if config['check_maxwell']:
        points = substream(config['seed'], 3).uniform(-1.0, 1.0,
                                                      (config['maxwell_points'], 3))
        report = check_maxwell(field, points)
        section['maxwell'] = {'sample_points': int(points.shape[0]),
                              'max_div': float(report.max_div),
                              'max_curl': float(report.max_curl),
                              'step': float(report.step)}
    return section


def diagonalize_quantum(A, config=None, pool=None):
    """
    Find the eigenvalues and eigenvectors of ``A`` by simulated measurements.

    The eigenvalues reported are the sampled measurement outcomes. The
    classical eigendecomposition only sets the outcome distribution and fills
    the verification columns of the report.

    Args:
        A (hermitianmatrix or array_like): The matrix.
        config (optional[dict]): Run configuration, see :func:`verify_config`.
        pool (optional): An object with a ``map`` method used for the
            measurement runs and the tomography shots.

    Returns:
        dict: The report.
    """
    t0 = time.perf_counter()
    config = verify_config(dict(config or {}))
    if not isinstance(A, hermitianmatrix):
        A = hermitianmatrix(A)
    verbose = config['verbose']
    seed = config['seed']
    constants = physicalconstants(config['g'], config['mu_B'], config['hbar'])

    # Steps 1 and 2: multipole expansion, spin observable.

    obs = to_observable(A, constants)
    basis, coeffs = obs.basis, obs.coeffs
    if verbose:
        print("Step 1: expanded N = {:d} matrix in {:d} multipoles.".format(
            A.dim, len(basis)))

    # Step 3: tuned apparatus.

    spec = oracle_spectrum(A, config['degeneracy_tol'])
    profiles = fieldprofiles(coeffs)
    forces = []
    for n, value in enumerate(spec.values):
        force = beam_force(profiles, basis, spec.vectors[n][:, 0], config['fd_step'])
        forces.append({'eigenspace': n,
                       'force': float(force),
                       'expected': -float(value),
                       'deviation': abs(float(force) + float(value))})
    if verbose:
        print("Step 3: largest force deviation {:.3e}.".format(
            max(f['deviation'] for f in forces)))

    # Step 4: repeated measurements.

    rule = stoppingrule(config['epsilon'], config['max_runs'])
    record = run_experiment(spec, rule, seed, noise_sigma=config['noise_sigma'],
                            pool=pool, verbose=verbose)
    clusters, overlapping = cluster_outcomes(record, config['cluster_tol'])
    if overlapping:
        warnings.warn("Outcome clusters overlap; the eigenvalue estimates "
                      + "are not separated and no states are reconstructed.")
    match_tol = max(config['cluster_tol'],
                    config['degeneracy_tol'] * np.max(np.abs(spec.values)))
    eigenvalues = []
    for c in clusters:
        oracle = float(spec.values[c.eigenspaces[0]]) if len(c.eigenspaces) == 1 else None
        match = oracle is not None and abs(c.estimate - oracle) <= match_tol
        eigenvalues.append({'estimate': float(c.estimate),
                            'count': int(c.count),
                            'oracle_value': oracle,
                            'oracle_match': bool(match)})

    # Step 5: post-selection and tomography.

    states = []
    for c in [] if overlapping else clusters:
        n = c.eigenspaces[0]
        P = spec.projectors[n]
        entry = {'eigenvalue': float(c.estimate),
                 'multiplicity': int(spec.multiplicities[n])}
        if config['tomography'] == 'experiment':
            rho = postselect(spec, n)
            estimates = estimate_expectations(rho, basis, config['shots'], seed,
                                              pool=pool, label=n)
            state = reconstruct_state(estimates, basis, projector=P)
            v = state.dominant_vector
            entry.update({'fidelity': state.fidelity_vs_oracle,
                          'state_fidelity': state.state_fidelity,
                          'min_eigenvalue': state.min_eigenvalue,
                          'degenerate': state.multiplicity > 1})
        else:
            v = calculate_eigenstate(A, c.estimate, seed=seed)
            entry.update({'fidelity': float(np.clip(np.vdot(v, P @ v).real, 0, 1)),
                          'state_fidelity': None,
                          'min_eigenvalue': None,
                          'degenerate': bool(spec.multiplicities[n] > 1)})
        entry['residual'] = eigenvector_residual(A, c.estimate, v)
        entry['vector'] = _pairs(v)
        states.append(entry)
    if verbose:
        print("Step 5: reconstructed {:d} eigenstates.".format(len(states)))

    report = {'schema': SCHEMA,
              'input': {'sha256': _digest(A), 'N': A.dim,
                        's': str(basis.spin.s)},
              'config': {k: v for k, v in config.items() if k != 'verbose'},
              'coefficients': [float(x) for x in coeffs.a],
              'forces': forces,
              'stopping_rule': {'epsilon': rule.epsilon,
                                'max_runs': rule.max_runs,
                                'N0': rule.minimum_runs(A.dim),
                                'runs': len(record),
                                'missing_probability':
                                    missing_probability(A.dim, len(record))},
              'eigenvalues': eigenvalues,
              'overlapping': bool(overlapping),
              'complete': record.complete,
              'states': states,
              'spin_half': None}
    if A.dim == 2:
        report['spin_half'] = _spin_half(A, obs, [e['estimate'] for e in eigenvalues],
                                         config, constants)
    elif config['check_maxwell']:
        warnings.warn("The Maxwell check only applies to the N = 2 field.")
    report['timing'] = {'seconds': time.perf_counter() - t0}
    return report


# -- Output. -- #

def format_text(report):
    """Human readable report with the five steps labelled."""
    lines = ["qsgdiag report ({})".format(report['schema']),
             "Input: N = {:d}, s = {}, sha256 = {}".format(
                 report['input']['N'], report['input']['s'],
                 report['input']['sha256'])]
    lines.append("Step 1: multipole coefficients")
    lines += ["  a[{:d}] = {:+.12g}".format(i, a)
              for i, a in enumerate(report['coefficients'])]
    lines.append("Step 2: spin observable H_A(S) = sum_nu a_nu T_nu")
    half = report['spin_half']
    if half is not None:
        lines.append("  a = {:+.12g}, B0 = ({:+.6g}, {:+.6g}, {:+.6g})".format(
            half['a'], *half['B0']))
        lines.append("  closed form eigenvalues: {:+.12g}, {:+.12g}".format(
            *half['closed_form']))
    lines.append("Step 3: beam forces F_1 (expected -A_n)")
    lines += ["  {:+.12g} (expected {:+.12g})".format(f['force'], f['expected'])
              for f in report['forces']]
    if half is not None:
        lines.append("  Swift forces: F+ = ({:+.6g}, {:+.6g}, {:+.6g}), ".format(
            *half['forces']['plus'])
            + "F- = ({:+.6g}, {:+.6g}, {:+.6g})".format(*half['forces']['minus']))
        if half['maxwell'] is not None:
            lines.append("  Maxwell: max |div B| = {:.3e}, ".format(
                half['maxwell']['max_div'])
                + "max |curl B| = {:.3e}".format(half['maxwell']['max_curl']))
    rule = report['stopping_rule']
    lines.append("Step 4: {:d} runs (N0 = {:d}, epsilon = {:g}), complete = {}".format(
        rule['runs'], rule['N0'], rule['epsilon'], report['complete']))
    lines += ["  A = {:+.12g}  count = {:d}  oracle match = {}".format(
        e['estimate'], e['count'], e['oracle_match']) for e in report['eigenvalues']]
    lines.append("Step 5: eigenstates ({} tomography)".format(
        report['config']['tomography']))
    for s in report['states']:
        fidelity = 'n/a' if s['fidelity'] is None else "{:.6f}".format(s['fidelity'])
        lines.append("  A = {:+.12g}  fidelity = {}  residual = {:.3e}".format(
            s['eigenvalue'], fidelity, s['residual']))
    lines.append("Time: {:.3f} s".format(report['timing']['seconds']))
    return "\n".join(lines) + "\n"


def emit_report(report, format='text', destination=None):
    """
    Write a report.

    Args:
        report (dict): Report from :func:`diagonalize_quantum`.
        format (optional[str]): ``'text'`` or ``'json'``.
        destination (optional): Path, open file, or ``None`` for stdout.
    """
    if format == 'json':
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    elif format == 'text':
        text = format_text(report)
    else:
        raise ValueError("Unknown format {!r}.".format(format))
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, 'write'):
        destination.write(text)
    else:
        with open(destination, 'w') as f:
            f.write(text)
