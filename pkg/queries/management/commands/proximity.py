from ._batch import BatchCommand


class Command(BatchCommand):
    help = "Minimum distance and foot-points from query points to axisymmetric quadrics"
    operation = 'proximity'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--oracle', action='store_true',
                            help="Add the brute-force oracle distance and its gap to each record")
        parser.add_argument('--resolution', type=int,
                            help="Oracle grid resolution (default: QUADRIC_ORACLE_RESOLUTION)")

    def operation_options(self, options) -> dict:
        return {'oracle': options['oracle'], 'resolution': options['resolution']}
