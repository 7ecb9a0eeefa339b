""" Dask tools for solspace """
