"""
Process-pool helpers for data-parallel scans.
"""

import multiprocessing

from indefinite_oga.config import NUM_PROCESSES

# Arrays installed once per worker by the pool initializer
_shared = {}


def _install_shared(shared):
    _shared.clear()
    _shared.update(shared)


def shared_data():
    """
    Mapping installed by the ScanPool that runs the current call.
    """
    return _shared


class ScanPool:
    """
    A process pool kept open for a whole run.

    `shared` is sent to every worker once, through the pool initializer, and
    read back inside the mapped function with shared_data(). With a single
    process no pool is started and items are processed in order in the
    calling process, so results do not depend on the process count.

    Args:
        num_processes: Number of processes to use (default: from config)
        shared: Picklable mapping of read-only data for the workers
    """

    def __init__(self, num_processes=None, shared=None):
        if num_processes is None:
            num_processes = NUM_PROCESSES
        self.num_processes = max(1, int(num_processes))
        self._shared = dict(shared or {})
        self._pool = None
        if self.num_processes > 1:
            self._pool = multiprocessing.Pool(
                processes=self.num_processes, initializer=_install_shared, initargs=(self._shared,)
            )

    def map(self, function, items):
        """
        Apply a picklable function to every item, preserving item order.
        """
        if self._pool is None:
            _install_shared(self._shared)
            return [function(item) for item in items]
        return self._pool.map(function, items)

    def close(self):
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
