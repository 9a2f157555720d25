import unittest
import numpy as np

from nmdslab.mpi import mpi_controller


class TestNmdslabMPI(unittest.TestCase):
    def test_split(self):
        # Test efficient splitting of tasks
        a = list(range(20))

        split7 = mpi_controller.split_1D(a, 7)

        self.assertTrue(np.all(split7[0] == [0, 1, 2]))
        self.assertTrue(
            np.all([len(s) for s in split7] == np.array([3, 3, 3, 3, 3, 3, 2]))
        )

        split8 = mpi_controller.split_1D(a, 8)

        self.assertTrue(np.all(split8[0] == [0, 1, 2]))
        self.assertTrue(
            np.all([len(s) for s in split8] == np.array([3, 3, 3, 3, 2, 2, 2, 2]))
        )

        # Nothing is lost or repeated
        self.assertEqual(sum(split8, []), a)

        split1 = mpi_controller.split_1D(a, 1)
        self.assertEqual(split1, [a])

    def test_broadcast(self):

        tasks = [("gdls", 4, i) for i in range(3)]
        got = mpi_controller.broadcast(tasks)

        self.assertEqual(got, tasks)
        self.assertEqual(mpi_controller.rank, 0)
        self.assertTrue(mpi_controller.is_root)

        gathered = mpi_controller.gather_objects({"hits": []})
        self.assertEqual(gathered, [{"hits": []}])

    def test_map_tasks(self):

        # Without a connection every task runs on the root, in order
        got = mpi_controller.map_tasks(lambda t: t * t, [3, 1, 2])
        self.assertEqual(got, [9, 1, 4])
