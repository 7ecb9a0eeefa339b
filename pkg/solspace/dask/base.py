
""" Basic Dask Tools  """

import dask

__all__ = ["get_delayed_func", "compute_items"]


def _no_delayed_(func):
    return func


def get_delayed_func(as_dask):
    """ """
    return dask.delayed if as_dask else _no_delayed_


def compute_items(func, items, workers=1, scheduler="processes"):
    """ applies func to every item, in parallel when workers > 1.

    Parameters
    ----------
    func: [callable]
        must be importable (top level) to go through the process scheduler.

    items: [list]
        one argument tuple per call.

    workers: [int] -optional-
        bounded pool size. 1 (or less) runs sequentially without dask.

    scheduler: [string] -optional-
        dask scheduler used when workers > 1.

    Returns
    -------
    list, in the items order.
    """
    items = [item if isinstance(item, tuple) else (item,) for item in items]
    as_dask = workers is not None and workers > 1 and len(items) > 1
    delayed = get_delayed_func(as_dask)
    results = [delayed(func)(*item) for item in items]
    if not as_dask:
        return results
    return list(dask.compute(*results, scheduler=scheduler, num_workers=int(workers)))
