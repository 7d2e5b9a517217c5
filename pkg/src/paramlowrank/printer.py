import sys
from enum import Enum, auto
from typing import Any, List, Optional, TextIO

from colorama import Fore as ColoramaColor
from colorama import Style as ColoramaStyle


class Color(Enum):
    """Wrap the Colorama colors used for run output.

    Refs: https://github.com/tartley/colorama/blob/master/colorama/ansi.py#L49 (AnsiFore class)
    """

    RED = auto()
    GREEN = auto()
    YELLOW = auto()
    BLUE = auto()
    CYAN = auto()


class Style(Enum):
    """Wrap Colorama's styles to make typing easier for the user."""

    DIM = auto()
    BRIGHT = auto()


class Printer:
    """Print progress messages of sweeps, fits and verification runs.

    Numerical functions never print; long-running components receive a
    Printer and report through it.

    >>> printer = Printer()
    >>> printer("Sweeping", 11, "grid points")
    Sweeping 11 grid points

    A quiet Printer swallows everything.

    >>> Printer(quiet=True)("Not shown")
    """

    def __init__(
        self,
        colorful: bool = False,
        *,
        quiet: bool = False,
        stream: Optional[TextIO] = None,
    ):
        """Initialize a Printer.

        Args:
            colorful: Whether or not to use colorful output. Defaults to False.
            quiet: Suppress all output. Defaults to False.
            stream: Where to write. Defaults to the current STDOUT at call time.
        """
        self.colorful = colorful
        self.quiet = quiet
        self.stream = stream

    def __call__(
        self,
        *messages: Any,
        color: Optional[Color] = None,
        style: Optional[Style] = None,
        emoji: Optional[str] = None,
    ) -> None:
        """Print the message with an optional color.

        Args:
            messages: The messages to print.
            color: The color to use.
            style: The style to use.
            emoji: The emoji to use at the beginning.
        """
        if self.quiet:
            return

        to_print = [str(message) for message in messages]
        if self.colorful:  # pragma: no cover
            self._make_colorful(to_print, color=color, style=style, emoji=emoji)

        print(*to_print, file=self.stream or sys.stdout)

    @staticmethod
    def _make_colorful(
        to_print: List[str],
        /,
        *,
        color: Optional[Color] = None,
        style: Optional[Style] = None,
        emoji: Optional[str] = None,
    ) -> None:  # pragma: no cover
        """Make a colorful print message.

        Args:
            to_print: The list of messages to print which can include color,
                style, and emoji. This reference is mutated in this method.
            color: The color to use.
            style: The style to use.
            emoji: The emoji to use.
        """
        if color or style:
            if color:
                to_print[0] = getattr(ColoramaColor, color.name) + to_print[0]
            if style:
                to_print[0] = getattr(ColoramaStyle, style.name) + to_print[0]
            to_print.append(ColoramaStyle.RESET_ALL)
        if emoji:
            to_print.insert(0, emoji)
