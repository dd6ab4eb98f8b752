from .backends import *
from .visualize import *

if TENSORBOARD_LOGGING == 1:
    from tensorboardX import SummaryWriter

__all__ = ["Logger"]


class Logger(object):
    r"""Owns the tensorboard writer and the visualizers of one command run.

    Visualizers are registered under a name and share the writer, so a command opens at
    most one event file however many reports it produces.

    Args:
        log_dir (str, optional): Directory where TensorboardX should store the logs. This is
            ignored if ``TENSORBOARD_LOGGING`` is ``0``.
        writer (tensorboardX.SummaryWriter, optonal): Send a `SummaryWriter` if you
            don't want to start a new SummaryWriter.
    """

    def __init__(self, log_dir=None, writer=None):
        if TENSORBOARD_LOGGING == 1:
            self.writer = SummaryWriter(log_dir) if writer is None else writer
        else:
            self.writer = None
        self.visualizers = {}
        self.register("report", ReportVisualize)

    def register(self, name, visualize, *args, **kwargs):
        r"""Register a new ``Visualize`` object with the Logger.

        Args:
            name (str): Key under which ``get`` returns it.
            visualize (type): Subclass of ``torchuv.logging.Visualize``.

        Returns:
            The created visualizer.
        """
        self.visualizers[name] = visualize(*args, writer=self.writer, **kwargs)
        return self.visualizers[name]

    def get(self, name):
        r"""The visualizer registered under ``name``."""
        return self.visualizers[name]

    def report(self, report, **kwargs):
        r"""Emits a ``key=value`` report through the ``report`` visualizer."""
        self.get("report")(report, **kwargs)

    def close(self):
        r"""Turns off the tensorboard ``SummaryWriter`` if it were created."""
        if self.writer is not None:
            self.writer.close()
