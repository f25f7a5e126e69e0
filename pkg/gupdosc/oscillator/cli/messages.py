messages = {
    'headroom_message': (
        'cutoff {cutoff} leaves no interior headroom for {levels} levels: '
        'use --cutoff {minimum} or more (cutoff >= levels + {headroom}), or lower --levels'
    ),
    'cluster_headroom_message': (
        'cutoff {cutoff} is too small for a cluster of {size} states at n={level}: '
        'use --cutoff {minimum} or more (cutoff >= cluster level + cluster size + 2)'
    ),
    'scan_range_message': 'scan needs --B-min, --B-max and --steps >= 2 (got {B_min}, {B_max}, {steps})',
    'scan_order_message': 'scan needs --B-max >= --B-min (got {B_min} > {B_max})',
    'xlsx_output_message': 'the xlsx format writes a file: give --output PATH',
    'unknown_key_message': 'unknown configuration key(s) {keys}',
    'unknown_tolerance_message': 'unknown tolerance {name!r}, expected one of {names}',
    'tolerance_format_message': 'tolerance overrides look like NAME=VALUE, got {value!r}',
    'config_file_message': 'cannot read configuration file {path}: {error}',
    'command_mismatch_message': 'configuration file is for {found!r}, not {expected!r}',
    'threads_message': 'GUP_DOSC_THREADS must be a positive integer, got {value!r}',
    'discrepancy_message': 'validation found {count} discrepancy row(s) outside the known list: {keys}',
    'computation_message': 'computation failed: {error}',

    'spectrum_title': 'Landau levels vs exact diagonalization (energies in m c^2)',
    'correct_title': "First-order GUP shifts (a c m hbar |w|)",
    'degenerate_title': 'Degenerate cluster n={level}, branch {branch} (a c m hbar |w|)',
    'scan_title': 'Field scan',
    'validate_title': 'Replication of published results',
    'error_title': 'Error',
}


def get_message(message_name: str, **fields) -> str:
    try:
        return messages[message_name].format(**fields)
    except KeyError:
        return message_name
