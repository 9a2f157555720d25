"""mpi.py

Spreading search partitions and catalog checks over the ranks of an MPI run"""

import warnings

import numpy as np


class MPIController(object):
    """Handle on MPI.COMM_WORLD. Until connect() succeeds it stands for a
    single root rank, so callers never need to test for MPI themselves."""

    def __init__(self):
        self._comm = None
        self._rank = 0
        self._size = 1

    def connect(self):
        try:
            from mpi4py import MPI
        except ImportError:
            warnings.warn("mpi4py is not installed, running on a single process")
            return

        self._comm = MPI.COMM_WORLD
        self._rank = self._comm.Get_rank()
        self._size = self._comm.Get_size()

    @property
    def rank(self):
        return self._rank

    @property
    def size(self):
        return self._size

    @property
    def is_root(self):
        return self._rank == 0

    def broadcast(self, obj):
        """The root's copy of obj, on every rank"""

        if self._comm is None:
            return obj
        return self._comm.bcast(obj, root=0)

    def gather_objects(self, obj):
        """One object per rank, listed in rank order on the root (None on the
        other ranks)"""

        if self._comm is None:
            return [obj]
        return self._comm.gather(obj, root=0)

    def split_1D(self, tasks, size=None):
        """Split tasks in contiguous blocks, one per rank. The first
        len(tasks) % size blocks hold one task more than the others."""

        n = size if size else self._size
        if n == 1:
            return [tasks]

        q, r = divmod(len(tasks), n)
        bounds = np.cumsum([0] + [q + 1] * r + [q] * (n - r))

        return [tasks[b0:b1] for b0, b1 in zip(bounds[:-1], bounds[1:])]

    def map_tasks(self, worker, tasks):
        """Run worker on the block of tasks of this rank and return all the
        results, in task order, on every rank"""

        mine = self.split_1D(tasks)[self._rank]
        gathered = self.gather_objects([worker(t) for t in mine])
        if self.is_root:
            gathered = [res for block in gathered for res in block]

        return self.broadcast(gathered)


mpi_controller = MPIController()
