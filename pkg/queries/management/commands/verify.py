"""
Randomized check of the closed-form distance against the brute-force oracle.

Canonical surfaces of every real type are moved by random rigid motions and
scaled by random factors; each case is solved both ways and a mismatch is
counted when the oracle beats the closed form by more than
``max(1e-4, 1e-3 * r_min)``.
"""

import json
import logging
import sys

import numpy as np
import pandas as pd
from django.core.management.base import BaseCommand, CommandError
from tqdm import tqdm

from surfaces.corpus import random_case
from surfaces.engine import get_proximity_engine
from surfaces.exceptions import QuadricError

logger = logging.getLogger(__name__)


def allowed_gap(r_min: float) -> float:
    return max(1e-4, 1e-3 * r_min)


class Command(BaseCommand):
    help = "Compare closed-form proximity with the sampling oracle on random rigid-transformed quadrics"

    def add_arguments(self, parser):
        parser.add_argument('--cases', type=int, default=1000)
        parser.add_argument('--seed', type=int, default=42)
        parser.add_argument('--reach', type=float, default=10.0,
                            help="Query points fall within this many surface sizes of the center")
        parser.add_argument('--resolution', type=int,
                            help="Oracle grid resolution (default: QUADRIC_ORACLE_RESOLUTION)")
        parser.add_argument('--tol', type=float)

    def handle(self, *args, **options):
        if options['cases'] < 0:
            raise CommandError("--cases must be non-negative", returncode=2)

        engine = get_proximity_engine()
        rng = np.random.default_rng(options['seed'])
        rows = []
        errors = 0

        progress = tqdm(range(options['cases']), desc="Verifying", file=sys.stderr,
                        disable=options['verbosity'] == 0)
        for index in progress:
            case = random_case(rng, reach=options['reach'])
            try:
                closed = engine.proximity(case.coeffs, case.point, options['tol']).r_min
                brute = engine.oracle(case.coeffs, case.point, options['resolution'], options['tol'])
            except QuadricError as e:
                errors += 1
                logger.error(f"Case {index} ({case.kind}) raised {e.code}: {e}")
                continue
            gap = closed - brute
            rows.append({'kind': str(case.kind), 'r_min': closed, 'oracle': brute, 'gap': gap,
                         'mismatch': gap > allowed_gap(closed)})
            if gap > allowed_gap(closed):
                logger.warning(f"Case {index} ({case.kind}): closed form {closed:.9g} vs oracle {brute:.9g}")

        df = pd.DataFrame(rows, columns=['kind', 'r_min', 'oracle', 'gap', 'mismatch'])
        mismatches = int(df['mismatch'].sum())
        summary = {
            'cases': options['cases'],
            'seed': options['seed'],
            'mismatches': mismatches,
            'errors': errors,
            'max_gap': float(df['gap'].max()) if len(df) else 0.0,
            'max_gap_by_kind': {kind: float(gap) for kind, gap in df.groupby('kind')['gap'].max().items()},
        }
        self.stdout.write(json.dumps(summary))

        if mismatches or errors:
            raise CommandError(f"{mismatches} mismatches and {errors} errors in {options['cases']} cases",
                               returncode=1)
