"""
   The MIT License (MIT)

   Copyright (C) 2026 The dyncal developers

   Permission is hereby granted, free of charge, to any person obtaining a copy
   of this software and associated documentation files (the "Software"), to deal
   in the Software without restriction, including without limitation the rights
   to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
   copies of the Software, and to permit persons to whom the Software is
   furnished to do so, subject to the following conditions:

   The above copyright notice and this permission notice shall be included in
   all copies or substantial portions of the Software.

   THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
   IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
   FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
   AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
   LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
   OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
   THE SOFTWARE.
"""
import argparse
import json
import os
import sys
import traceback

import numpy as np
import pandas as pd

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import cast, Callable, Optional, Union, Any  # noqa: F401

from dyncal.globals import VERSION
from dyncal import exitcodes
from dyncal.artifact import ModelArtifact
from dyncal.bglprofile import generate_population, generate_profile, load_profiles
from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import DataIOError, DyncalError, InvalidInputError, NumericalError
from dyncal.evaluation import compare_update, cross_validate, evaluate_holdout, records_frame, snr_label, write_records_csv, write_summary_json
from dyncal.experimentconf import ExperimentConfig
from dyncal.metrics import summarize
from dyncal.online_update import DECISION_FAILED, OnlineUpdater, read_event_log, tune_update_params, write_event_log
from dyncal.outputbuffer import OutputBuffer
from dyncal.pipeline import build_samples, flatten, predict_series, train_model
from dyncal.sensormodel import sensor_characteristics, simulate_series
from dyncal.timeseries import TimeSeries, read_series_dir, write_csv
from dyncal.utils import Utils
from dyncal.windowing import downsample, extract_samples, split_by_sample, split_by_series


# Only import colorama under Windows.  Other OSes can natively handle terminal colors.
if sys.platform == 'win32':
    try:
        from colorama import just_fix_windows_console  # type: ignore
        just_fix_windows_console()
    except ImportError:
        pass


COMMANDS = ('simulate', 'train', 'predict', 'update', 'tune', 'evaluate')

# Command-line options that map one-to-one onto ExperimentConfig fields: (flag, field, metavar, help).
CONFIG_OPTIONS = [
    ('--scenario', 'scenario', 'NAME', 'scenario name recorded in outputs'),
    ('--data-dir', 'data_dir', 'DIR', 'directory of series CSV files (and optional manifest.json)'),
    ('--profiles-file', 'profiles_file', 'FILE', 'JSON file of explicit BGL profiles (simulate)'),
    ('--n-profiles', 'n_profiles', 'N', 'number of virtual patients to simulate'),
    ('--population', 'population', 'JSON', 'population distribution overrides'),
    ('--sensor', 'sensor', 'JSON', 'sensor model parameter overrides'),
    ('--time-unit', 'time_unit', 'UNIT', 'unit of elapsed time in the drift term: seconds or minutes'),
    ('--lifespan', 'lifespan_s', 'SECONDS', 'sensor lifespan; later samples are warned about'),
    ('--downsample', 'downsample', 'N', 'keep every N-th sample before windowing'),
    ('--past', 'p', 'N', 'past sensor outputs in a feature vector'),
    ('--future', 'ell', 'N', 'future sensor outputs in a feature vector'),
    ('--snr', 'snr_db', 'DB[,DB,...]', 'reference noise levels in dB ("inf" for none)'),
    ('--noise-order', 'noise_order', 'ORDER', 'after-downsample or before-downsample'),
    ('--trials', 'n_trials', 'N', 'hyperparameter search restarts'),
    ('--max-iterations', 'max_iterations', 'N', 'gradient steps per restart'),
    ('--delta-range', 'delta_range', 'G,LO,HI', 'initial guess and bounds of the kernel length scale'),
    ('--sigma-range', 'sigma_range', 'G,LO,HI', 'initial guess and bounds of the kernel amplitude'),
    ('--noise-range', 'sigma_u_tilde_range', 'G,LO,HI', 'initial guess and bounds of the reference noise level'),
    ('--max-samples', 'max_samples', 'N', 'training set cap (0: no cap)'),
    ('--threads', 'threads', 'N', 'worker threads for restarts and folds'),
    ('--split-mode', 'split_mode', 'MODE', 'series or sample'),
    ('--test-fraction', 'test_fraction', 'F', 'share of series (or samples) held out'),
    ('--folds', 'n_folds', 'N', 'cross-validation folds'),
    ('--eps-u', 'eps_u', 'X', 'outlier threshold (normalized units)'),
    ('--c', 'c', 'X', 'similarity decay rate'),
    ('--eps-gamma', 'eps_gamma', 'X', 'confidence threshold'),
    ('--tuning-split', 'tuning_split_s', 'SECONDS', 'elapsed time separating update and scoring segments'),
    ('--candidates', 'tuning_candidates', 'N', 'latin hypercube candidates for tune'),
]


def process_commandline(out: OutputBuffer, args: List[str]) -> Tuple[ExperimentConfig, argparse.Namespace]:
    # pylint: disable=too-many-branches
    conf = ExperimentConfig()

    enable_colors = not any(i in args for i in ['--no-colors', '-n'])

    # Disable colors if the NO_COLOR environment variable is set.
    if "NO_COLOR" in os.environ:
        enable_colors = False
    out.use_colors = enable_colors

    parser = argparse.ArgumentParser(prog='dyncal', description="# dyncal {}: dynamic calibration of drifting sensors with Gaussian processes.  Settings are taken from defaults, then command-line options, then the experiment file (-c), each overriding the previous.".format(VERSION), allow_abbrev=False)
    parser.add_argument("command", choices=COMMANDS, help="the action to run")
    parser.add_argument("inputs", nargs="*", help="series CSV files (predict, update)")

    parser.add_argument("-a", "--artifact", action="store", dest="artifact", metavar="model.json", type=str, default=None, help="model artifact (predict, update, tune, evaluate)")
    parser.add_argument("-c", "--config", action="store", dest="config", metavar="experiment.conf", type=str, default=None, help="experiment file; its settings override command-line options")
    parser.add_argument("-d", "--debug", action="store_true", dest="debug", default=False, help="enable debugging output")
    parser.add_argument("-l", "--level", action="store", dest="level", type=str, choices=["info", "warn", "fail"], default="info", help="minimum output level (default: %(default)s)")
    parser.add_argument("-m", "--mode", action="store", dest="mode", type=str, choices=["cv", "holdout", "update"], default="cv", help="evaluation mode (default: %(default)s)")
    parser.add_argument("-n", "--no-colors", action="store_true", dest="no_colors", default=False, help="disable colors (automatic when the NO_COLOR environment variable is set)")
    parser.add_argument("-o", "--output-dir", action="store", dest="output_dir", metavar="DIR", type=str, default=None, help="directory outputs are written to (default: current directory)")
    parser.add_argument("-s", "--seed", action="store", dest="seed", metavar="N", type=int, default=None, help="base random seed")
    parser.add_argument("-v", "--verbose", action="store_true", dest="verbose", default=False, help="enable verbose output")
    parser.add_argument("--full-scale", action="store_true", dest="full_scale", default=False, help="100 restarts and no training set cap")
    parser.add_argument("--output-artifact", action="store", dest="output_artifact", metavar="FILE", type=str, default=None, help="where update writes the updated artifact (default: replace the input artifact)")
    parser.add_argument("--replay", action="store", dest="replay", metavar="events.jsonl", type=str, default=None, help="update: re-apply the samples of a recorded event log instead of reading series files")
    for flag, field, metavar, help_text in CONFIG_OPTIONS:
        parser.add_argument(flag, action="store", dest=field, metavar=metavar, type=str, default=None, help=help_text)

    # Series files may come before, between or after the options.
    argument = parser.parse_intermixed_args(args=args)

    out.verbose = argument.verbose
    out.debug = argument.debug
    out.level = argument.level

    try:
        if argument.full_scale:
            conf.set_full_scale()
        if argument.seed is not None:
            conf.seed = argument.seed
        if argument.output_dir is not None:
            conf.output_dir = argument.output_dir
        for _, field, _, _ in CONFIG_OPTIONS:
            value = getattr(argument, field)
            if value is not None:
                setattr(conf, field, value)
    except ValueError as e:
        raise InvalidInputError(str(e)) from e

    if argument.config is not None:
        conf.load_file(argument.config)

    return conf, argument


def _output_path(conf: ExperimentConfig, name: str) -> str:
    try:
        os.makedirs(conf.output_dir, exist_ok=True)
    except OSError as e:
        raise DataIOError('cannot create output directory %s: %s' % (conf.output_dir, e)) from e
    return os.path.join(conf.output_dir, name)


def _metadata(conf: ExperimentConfig, **extra: Any) -> Dict[str, Any]:
    meta: Dict[str, Any] = {'dyncal_version': VERSION, 'config_hash': conf.config_hash(), 'seed': conf.seed, 'scenario': conf.scenario}
    meta.update(extra)
    return meta


def _load_series(conf: ExperimentConfig) -> List[TimeSeries]:
    if conf.data_dir is None:
        raise InvalidInputError('no data directory given (--data-dir)')
    series = read_series_dir(conf.data_dir)
    if len(series) == 0:
        raise InvalidInputError('no series found in %s' % conf.data_dir)
    return series


def _held_out(conf: ExperimentConfig, artifact: ModelArtifact) -> List[TimeSeries]:
    '''The series the artifact was not trained on, from the data directory (all series when the artifact does not record a series split).'''
    series = _load_series(conf)
    held_out = artifact.provenance.get('held_out_series')
    if held_out is None:
        return series
    return [s for s in series if s.series_id in set(held_out)]


def _artifact_samples(conf: ExperimentConfig, artifact: ModelArtifact, series_list: Sequence[TimeSeries], out: OutputBuffer) -> Dict[str, List[CalibrationSample]]:
    '''Windows series the way the artifact's training data was prepared.'''
    conf.p, conf.ell = artifact.window.p, artifact.window.ell
    conf.downsample = artifact.provenance.get('downsample', conf.downsample)
    snr_db = float(artifact.provenance.get('snr_db', conf.snr_db[0]))
    datasets = build_samples(series_list, conf, snr_db, out=out)

    held_out = artifact.provenance.get('held_out_samples')
    if held_out is not None:
        keep = {(str(sid), int(k)) for sid, k in held_out}
        datasets = {sid: [s for s in samples if (sid, s.k) in keep] for sid, samples in datasets.items()}
        datasets = {sid: samples for sid, samples in datasets.items() if len(samples) > 0}
    return datasets


def cmd_simulate(conf: ExperimentConfig, out: OutputBuffer) -> int:
    if conf.profiles_file is not None:
        profiles = load_profiles(conf.profiles_file)
    else:
        profiles = generate_population(conf.population_spec(), conf.n_profiles, Utils.derive_seed(conf.seed, 'population'))

    sensor = conf.sensor_model()
    meta = _metadata(conf)
    entries = []
    for sid, profile in profiles:
        _, u = generate_profile(profile, Utils.derive_seed(conf.seed, 'wander', sid), out=out)
        series = simulate_series(sensor, u, profile.sample_interval_s, series_id=sid)
        filename = '%s.csv' % sid
        series.write_csv(_output_path(conf, filename), meta)
        entries.append({'file': filename, 'series_id': sid, 'n_samples': len(series), 'sample_interval_s': series.sample_interval})
        out.v('Simulated %s: %d samples.' % (sid, len(series)))

    if len(profiles) == 0:
        out.warn('The scenario has no profiles; writing an empty manifest.')

    manifest = {'series': entries, 'sensor': sensor.to_dict(), 'provenance': meta}
    try:
        with open(_output_path(conf, 'manifest.json'), 'w', encoding='utf-8') as f:
            json.dump(manifest, f, sort_keys=True, indent=2)
            f.write('\n')
    except OSError as e:
        raise DataIOError('cannot write manifest: %s' % e) from e

    for name, df in sensor_characteristics(sensor).items():
        write_csv(_output_path(conf, 'characteristic_%s.csv' % name), df, meta)

    out.good('Wrote %d series to %s.' % (len(entries), conf.output_dir))
    return exitcodes.GOOD


def cmd_train(conf: ExperimentConfig, out: OutputBuffer) -> int:
    series = _load_series(conf)
    snr_db = conf.snr_db[0]
    datasets = build_samples(series, conf, snr_db, out=out)
    split_seed = Utils.derive_seed(conf.seed, 'holdout')

    provenance: Dict[str, Any] = _metadata(conf, snr_db=snr_label(snr_db), downsample=conf.downsample, split_mode=conf.split_mode)
    if conf.split_mode == 'series':
        train_sets, test_sets = split_by_series(datasets, conf.test_fraction, split_seed)
        train = flatten(train_sets)
        provenance['train_series'] = sorted(train_sets)
        provenance['held_out_series'] = sorted(test_sets)
    else:
        train, test = split_by_sample(flatten(datasets), conf.test_fraction, split_seed)
        provenance['held_out_samples'] = [[s.series_id, s.k] for s in test]

    out.v('Training on %d samples from %d series.' % (len(train), len(datasets)), write_now=True)
    model, result = train_model(train, conf, out=out)
    provenance['log_likelihood'] = result.log_likelihood
    provenance['best_trial'] = result.best_trial

    artifact = ModelArtifact(model, conf.window_spec(), provenance)
    artifact.save(_output_path(conf, 'model.json'))

    trials = pd.DataFrame([{
        'trial': t.index,
        'start_delta': t.start.delta,
        'start_sigma': t.start.sigma,
        'start_sigma_u_tilde': t.start.sigma_u_tilde,
        'delta': np.nan if t.theta is None else t.theta.delta,
        'sigma': np.nan if t.theta is None else t.theta.sigma,
        'sigma_u_tilde': np.nan if t.theta is None else t.theta.sigma_u_tilde,
        'log_likelihood': t.log_likelihood,
        'iterations': t.iterations,
        'converged': t.converged,
        'stop_reason': t.stop_reason,
    } for t in result.trials])
    write_csv(_output_path(conf, 'trials.csv'), trials, _metadata(conf))

    out.good('Trained on %d samples: %s (log-likelihood %.4f).' % (model.n_samples, result.theta, result.log_likelihood))
    return exitcodes.GOOD


def _require_artifact(argument: argparse.Namespace, out: OutputBuffer) -> ModelArtifact:
    if argument.artifact is None:
        raise InvalidInputError('no model artifact given (--artifact)')
    return ModelArtifact.load(argument.artifact, out=out)


def cmd_predict(conf: ExperimentConfig, argument: argparse.Namespace, out: OutputBuffer) -> int:
    artifact = _require_artifact(argument, out)
    if len(argument.inputs) == 0:
        raise InvalidInputError('no series CSV files given')

    factor = int(artifact.provenance.get('downsample', 1))
    for path in argument.inputs:
        series = downsample(TimeSeries.read_csv(path), factor)
        estimates = predict_series(artifact.model, series, artifact.window, out=out)
        if len(estimates) == 0:
            out.warn('Series %s is shorter than the window (%d samples); no estimates.' % (series.series_id, artifact.window.length))

        # Estimates use ell future outputs, so they lag the stream by ell samples.
        meta = _metadata(conf, artifact_config_hash=artifact.provenance.get('config_hash', ''), series_id=series.series_id, non_causal_lag_samples=artifact.window.ell, non_causal_lag_s=artifact.window.ell * series.sample_interval)
        write_csv(_output_path(conf, '%s_estimates.csv' % series.series_id), estimates, meta)
        out.v('Estimated %d sample(s) of series %s.' % (len(estimates), series.series_id))

    out.good('Wrote estimates for %d series to %s.' % (len(argument.inputs), conf.output_dir))
    return exitcodes.GOOD


def _replay_update(artifact: ModelArtifact, argument: argparse.Namespace, out: OutputBuffer) -> OnlineUpdater:
    events = read_event_log(argument.replay)
    updater = OnlineUpdater.replay(artifact.model, events, out=out)
    recorded = [e for e in events if e.decision != DECISION_FAILED]
    mismatches = sum(1 for a, b in zip(recorded, updater.events) if (a.decision, a.index) != (b.decision, b.index))
    if mismatches > 0:
        out.warn('%d of %d replayed event(s) took a different decision than recorded in %s.' % (mismatches, len(recorded), argument.replay))
    else:
        out.v('Replayed %d event(s) from %s with identical decisions.' % (len(recorded), argument.replay))
    return updater


def cmd_update(conf: ExperimentConfig, argument: argparse.Namespace, out: OutputBuffer) -> int:
    artifact = _require_artifact(argument, out)
    log_path = _output_path(conf, 'events.jsonl')
    if argument.replay is not None:
        updater = _replay_update(artifact, argument, out)
        config = updater.config
        streams = [os.path.basename(argument.replay)]
    else:
        if len(argument.inputs) == 0:
            raise InvalidInputError('no sample stream CSV files given (or --replay)')

        factor = int(artifact.provenance.get('downsample', 1))
        stream: List[CalibrationSample] = []
        for path in argument.inputs:
            series = downsample(TimeSeries.read_csv(path), factor)
            stream.extend(extract_samples(series, artifact.window, lifespan_s=artifact.model.lifespan_s, out=out))

        config = conf.update_config()
        updater = OnlineUpdater(artifact.model, config, out=out)
        try:
            updater.run(stream)
        except NumericalError:
            write_event_log(log_path, updater.events)
            out.fail('Refactorization failed after %d event(s); the artifact was left unchanged.' % (len(updater.events) - 1), write_now=True)
            raise
        streams = [os.path.basename(p) for p in argument.inputs]
    write_event_log(log_path, updater.events)

    provenance = dict(artifact.provenance)
    provenance['updates'] = list(provenance.get('updates', [])) + [{
        'config': config.to_dict(),
        'config_hash': conf.config_hash(),
        'events': len(updater.events),
        'outliers': updater.n_outliers,
        'streams': streams,
        'replayed': argument.replay is not None,
    }]
    updated = ModelArtifact(updater.model, artifact.window, provenance)
    updated.save(argument.output_artifact if argument.output_artifact is not None else argument.artifact)

    out.good('Applied %d sample(s): %d outlier alert(s), dataset size %d.' % (len(updater.events), updater.n_outliers, updater.model.n_samples))
    return exitcodes.GOOD


def cmd_tune(conf: ExperimentConfig, argument: argparse.Namespace, out: OutputBuffer) -> int:
    artifact = _require_artifact(argument, out)
    datasets = _artifact_samples(conf, artifact, _held_out(conf, artifact), out)
    tuning = [datasets[sid] for sid in sorted(datasets)]

    result = tune_update_params(artifact.model, tuning, Utils.derive_seed(conf.seed, 'tune'), ranges=conf.tuning_ranges(), n_candidates=conf.tuning_candidates, split_s=conf.tuning_split_s, out=out)

    snippet = '# Online update parameters selected by "dyncal tune" (mean PAE %.4f%%).\n' % result.best_score
    snippet += ExperimentConfig.format_lines(result.config.to_dict())
    try:
        with open(_output_path(conf, 'update_params.conf'), 'w', encoding='utf-8') as f:
            f.write(snippet)
    except OSError as e:
        raise DataIOError('cannot write update parameters: %s' % e) from e

    candidates = pd.DataFrame([dict(cfg.to_dict(), mean_pae=score) for cfg, score in result.candidates])
    write_csv(_output_path(conf, 'tuning_candidates.csv'), candidates, _metadata(conf))

    cfg = result.config
    out.good('Selected eps_u=%.4f, c=%.4f, eps_gamma=%.4f (mean PAE %.3f%%).' % (cfg.eps_u, cfg.c, cfg.eps_gamma, result.best_score))
    return exitcodes.GOOD


def _report(out: OutputBuffer, label: str, summary: Dict[str, Any]) -> None:
    verdict = 'pass' if summary['iso15197_pass'] else 'fail'
    line = '%s: %d estimates, median PAE %.2f%%, max PAE %.2f%%, ISO 15197 %.1f%% (%s)' % (label, summary['n_records'], summary['pae_boxplot']['median'], summary['max_pae'], 100.0 * summary['iso15197_pass_fraction'], verdict)
    if summary['iso15197_pass']:
        out.good(line)
    else:
        out.warn(line)


def cmd_evaluate(conf: ExperimentConfig, argument: argparse.Namespace, out: OutputBuffer) -> int:
    out.head('# %s evaluation' % argument.mode)
    meta = _metadata(conf, mode=argument.mode)
    summary: Dict[str, Any] = {'provenance': meta}

    if argument.mode == 'cv':
        result = cross_validate(_load_series(conf), conf, out=out)
        frames = [records_frame(f.records, snr_db=snr_label(f.snr_db), fold=f.fold) for f in result.folds]
        summary.update(result.summary())
        for label, agg in summary['aggregate'].items():
            _report(out, 'SNR %s dB' % label, agg)
    else:
        artifact = _require_artifact(argument, out)
        meta['artifact_config_hash'] = artifact.provenance.get('config_hash', '')
        datasets = _artifact_samples(conf, artifact, _held_out(conf, artifact), out)
        if len(datasets) == 0:
            raise InvalidInputError('empty test set')

        if argument.mode == 'holdout':
            records = evaluate_holdout(artifact.model, datasets)
            frames = [records_frame(records, label='holdout')]
            summary['aggregate'] = {'holdout': summarize(records)}
        else:
            labeled = compare_update(artifact.model, datasets, conf.update_config(), conf.tuning_split_s, out=out)
            frames = [records_frame(labeled[label], label=label) for label in ('w', 'wo')]
            summary['aggregate'] = {label: summarize(labeled[label]) for label in ('w', 'wo') if len(labeled[label]) > 0}
            summary['update_config'] = conf.update_config().to_dict()
        for label, agg in summary['aggregate'].items():
            _report(out, label, agg)

    write_records_csv(_output_path(conf, 'records_%s.csv' % argument.mode), frames, meta)
    write_summary_json(_output_path(conf, 'summary_%s.json' % argument.mode), summary)
    return exitcodes.GOOD


def run(conf: ExperimentConfig, argument: argparse.Namespace, out: OutputBuffer) -> int:
    out.d('Experiment settings (hash %s):\n%s' % (conf.config_hash(), conf), write_now=True)
    if argument.command == 'simulate':
        return cmd_simulate(conf, out)
    elif argument.command == 'train':
        return cmd_train(conf, out)
    elif argument.command == 'predict':
        return cmd_predict(conf, argument, out)
    elif argument.command == 'update':
        return cmd_update(conf, argument, out)
    elif argument.command == 'tune':
        return cmd_tune(conf, argument, out)
    return cmd_evaluate(conf, argument, out)


def main(args: Optional[List[str]] = None) -> int:
    out = OutputBuffer(buffer_output=False)

    # If we're on Windows, but the colorama module could not be imported, print a warning if we're in verbose mode.
    if (sys.platform == 'win32') and ('colorama' not in sys.modules):
        out.v("WARNING: colorama module not found.  Colorized output will be disabled.", write_now=True)

    ret = exitcodes.GOOD
    try:
        conf, argument = process_commandline(out, sys.argv[1:] if args is None else args)
        ret = run(conf, argument, out)
        if out.warnings_emitted > 0:
            out.info('Finished with %d warning(s).' % out.warnings_emitted)
    except SystemExit as e:
        # Raised by argparse: code 0 after --help, 2 on a usage error.
        ret = exitcodes.GOOD if not e.code else exitcodes.INVALID_INPUT
    except InvalidInputError as e:
        out.fail('Invalid input: %s' % e, always_print=True)
        ret = exitcodes.INVALID_INPUT
    except NumericalError as e:
        out.fail('Numerical failure: %s' % e, always_print=True)
        ret = exitcodes.NUMERICAL_FAILURE
    except DataIOError as e:
        out.fail('I/O error: %s' % e, always_print=True)
        ret = exitcodes.IO_FAILURE
    except DyncalError as e:
        out.fail('Error: %s' % e, always_print=True)
        ret = exitcodes.UNKNOWN_ERROR
    except Exception:  # pylint: disable=broad-except
        out.fail(traceback.format_exc(), always_print=True)
        ret = exitcodes.UNKNOWN_ERROR

    out.write()
    return ret


if __name__ == '__main__':  # pragma: nocover
    sys.exit(main())
