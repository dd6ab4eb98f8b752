import numbers

from .backends import *

if TENSORBOARD_LOGGING == 1:
    from tensorboardX import SummaryWriter

__all__ = [
    "Visualize",
    "ReportVisualize",
    "ProgressVisualize",
    "SampleVisualize",
    "format_value",
]


def format_value(value):
    r"""Text form of a report value: ``repr`` for floats so values survive a round trip."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return repr(float(value))
    return str(value)


class Visualize(object):
    r"""Base class of every report sink.

    Subclasses implement ``log_console`` and, when they have scalars to plot,
    ``log_tensorboard``. Calling the object dispatches to the enabled backends and then
    advances ``step``.

    Args:
        log_dir (str, optional): Event file directory; unused unless ``TENSORBOARD_LOGGING``
            is ``1``.
        writer (tensorboardX.SummaryWriter, optional): Shared writer to reuse.
    """

    def __init__(self, log_dir=None, writer=None):
        self.step = 1
        self.writer = None
        if TENSORBOARD_LOGGING == 1:
            self.writer = SummaryWriter(log_dir) if writer is None else writer

    def log_tensorboard(self, *args, **kwargs):
        pass

    def log_console(self, *args, **kwargs):
        raise NotImplementedError

    def __call__(self, *args, lock_console=False, lock_tensorboard=False, **kwargs):
        if CONSOLE_LOGGING == 1 and not lock_console:
            self.log_console(*args, **kwargs)
        if self.writer is not None and not lock_tensorboard:
            self.log_tensorboard(*args, **kwargs)
        self.step += 1


class ReportVisualize(Visualize):
    r"""Prints a report as ``key=value`` lines, one per entry, in insertion order.

    Numeric entries are also sent to tensorboard under ``<tag>/<key>``.

    Args:
        tag (str, optional): Tensorboard namespace of the report.
        log_dir (str, optional): Directory where TensorboardX should store the logs.
        writer (tensorboardX.SummaryWriter, optonal): An existing writer.
    """

    def __init__(self, tag="report", log_dir=None, writer=None):
        super(ReportVisualize, self).__init__(log_dir, writer)
        self.tag = tag

    def log_console(self, report):
        for key, value in report.items():
            print("{}={}".format(key, format_value(value)))

    def log_tensorboard(self, report):
        for key, value in report.items():
            if isinstance(value, numbers.Real) and not isinstance(value, bool):
                self.writer.add_scalar(
                    "{}/{}".format(self.tag, key), float(value), self.step
                )


class ProgressVisualize(Visualize):
    r"""Energy trace of an iterative optimizer.

    Every call records one iteration; the console gets a line every ``print_every``
    iterations, tensorboard gets every iteration.

    Args:
        tag (str, optional): Name of the traced quantity.
        print_every (int, optional): Console period in iterations.
    """

    def __init__(self, tag="energy", print_every=50, log_dir=None, writer=None):
        super(ProgressVisualize, self).__init__(log_dir, writer)
        self.tag = tag
        self.print_every = print_every
        self.trace = []

    def __call__(self, iteration, value, **kwargs):
        self.trace.append(value)
        super(ProgressVisualize, self).__call__(iteration, value, **kwargs)

    def log_console(self, iteration, value):
        if (iteration + 1) % self.print_every == 0:
            print("# iteration {} {} {}".format(iteration + 1, self.tag, value))

    def log_tensorboard(self, iteration, value):
        self.writer.add_scalar(self.tag, value, iteration + 1)


class SampleVisualize(Visualize):
    r"""Status line of every processed dataset sample.

    Lines look like ``sample[3]=ok consistency=0.12``; failed samples print their error.
    """

    def log_console(self, index, status, consistency=None, error=None):
        line = "sample[{}]={}".format(index, status)
        if consistency is not None:
            line += " consistency={}".format(format_value(consistency))
        if error is not None:
            line += " error={}".format(error)
        print(line)

    def log_tensorboard(self, index, status, consistency=None, error=None):
        if consistency is not None:
            self.writer.add_scalar("samples/consistency", consistency, index)
