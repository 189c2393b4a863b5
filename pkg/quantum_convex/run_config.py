"""Run configuration of the experiment harness.

Note:
    Settings are merged in this order, later ones win:

    * COMMON_DEFAULTS and COMMAND_DEFAULTS of lookup_table
    * top-level keys of the JSON config file
    * the section of the config file named after the subcommand
    * command-line flags

    The "instance" table is merged key by key, so a flag like --n only
    replaces the dimension of the configured family.

Example:
    ::

        {
            "seed": 7,
            "instance": {"family": "sum_coords", "n": 3},
            "optimize": {"epsilon": 0.05, "trials": 4}
        }
"""


# IMPORTS ---
# Python imports
import copy
import json

# Local imports
from quantum_convex import LOG
from quantum_convex import errors
from quantum_convex import lookup_table


class RunConfig(object):
    """All settings of one subcommand run.

    Note:
        Every setting is an attribute. The seed determines every stochastic
        choice, so equal configs give byte-identical output.
    """

    def __init__(self, command, values=None):
        """RunConfig-class constructor.

        Args:
            command (str): Subcommand name.
            values (dict): Settings overriding the defaults.

        Raises:
            ParamError: If the command or a setting is unknown.
        """
        if command not in lookup_table.COMMAND_DEFAULTS:
            msg = "Unknown subcommand '{0}'!".format(command)
            raise errors.ParamError(msg)

        settings = copy.deepcopy(lookup_table.COMMON_DEFAULTS)
        settings.update(copy.deepcopy(lookup_table.COMMAND_DEFAULTS[command]))

        for key, value in (values or {}).items():
            if key not in settings:
                msg = "Unknown setting '{0}' for {1}, expected one of: {2}".format(
                    key, command, ", ".join(sorted(settings))
                )
                raise errors.ParamError(msg)
            if key == "instance":
                settings[key].update(value or {})
            else:
                settings[key] = value

        self.command = command
        self._keys = sorted(settings)
        for key, value in settings.items():
            setattr(self, key, value)

        self._validate()

    def __repr__(self):
        return "RunConfig({0}, seed={1}, trials={2})".format(
            self.command, self.seed, self.trials
        )

    def _validate(self):
        if not isinstance(self.seed, int) or self.seed < 0:
            msg = "Seed must be a non-negative integer, got {0}!".format(self.seed)
            raise errors.ParamError(msg)

        if not isinstance(self.trials, int) or self.trials < 1:
            msg = "Trials must be a positive integer, got {0}!".format(self.trials)
            raise errors.ParamError(msg)

        if not isinstance(self.workers, int) or self.workers < 1:
            msg = "Workers must be a positive integer, got {0}!".format(self.workers)
            raise errors.ParamError(msg)

    def as_dict(self):
        """All settings including the command, for the CSV config echo."""
        settings = {key: getattr(self, key) for key in self._keys}
        settings["command"] = self.command
        return settings

    def echo(self):
        """Settings as a single JSON line with sorted keys."""
        return json.dumps(self.as_dict(), sort_keys=True)


def load_run_config(file_path):
    """Read the settings of a JSON config file.

    Args:
        file_path (str): Path of the config file.

    Raises:
        ParamError: If the file is no valid JSON object.

    Returns:
        dict: The settings, with subcommand sections still nested.
    """
    try:
        with open(file_path) as config_file:
            values = json.load(config_file)
    except ValueError as err:
        msg = "Config file {0} is no valid JSON: {1}".format(file_path, err)
        raise errors.ParamError(msg)

    if not isinstance(values, dict):
        msg = "Config file {0} must hold a JSON object!".format(file_path)
        raise errors.ParamError(msg)

    LOG.info("Loaded run config %s", file_path)
    return values


def build_run_config(command, file_values=None, cli_values=None):
    """Merge file and command-line settings into a RunConfig.

    Args:
        command (str): Subcommand name.
        file_values (dict): Settings as returned by load_run_config.
        cli_values (dict): Settings given on the command line.

    Returns:
        RunConfig: The merged configuration.
    """
    values = {}
    instance = {}
    file_values = dict(file_values or {})
    section = file_values.pop(command, None) or {}
    for name in lookup_table.COMMAND_DEFAULTS:
        file_values.pop(name, None)

    for layer in (file_values, section, cli_values or {}):
        for key, value in layer.items():
            if key == "instance":
                instance.update(value or {})
            else:
                values[key] = value

    if instance:
        values["instance"] = instance
    return RunConfig(command, values)
