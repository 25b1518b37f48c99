from ._batch import BatchCommand


class Command(BatchCommand):
    help = "Classify quadric records (JSON lines or CSV) into axisymmetric types"
    operation = 'classify'
