#pylint: disable=missing-docstring,line-too-long,trailing-whitespace, wrong-import-order, unused-import
from . import queue, tasks


if __name__ == '__main__':
    queue.start()
