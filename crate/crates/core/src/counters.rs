/// Work counters threaded through every convolution call site.
///
/// `conv_input_values` is the sum of declared input window lengths over all
/// Boolean convolutions; `maxplus_input_values` is the analogous total for
/// max-plus convolutions. These are what the quasi-linear scaling checks
/// measure, independent of backend.
#[derive(Debug, Default, Clone)]
pub struct WorkCounters {
    pub conv_calls: u64,
    pub conv_input_values: u64,
    pub maxplus_calls: u64,
    pub maxplus_input_values: u64,
    pub witness_queries: u64,
    /// Largest single result window (in values) allocated by a convolution.
    pub peak_window_values: u64,
    pub recursion_depth_max: u32,
    pub base_cases: u64,
    pub splits: u64,
    /// The b parameter chosen at each halver split, in order.
    pub b_chosen: Vec<usize>,
    /// Nanoseconds spent inside Boolean convolutions, bucketed by
    /// log2 of the result window; index 0 counts everything below 2^10.
    pub conv_ns_by_log2: Vec<u64>,
    /// Time split by backend actually used.
    pub conv_ns_ntt: u64,
    pub conv_ns_shift_or: u64,
}

impl WorkCounters {
    pub fn record_conv(&mut self, len_a: u64, len_b: u64, out_window: u64) {
        self.conv_calls += 1;
        self.conv_input_values += len_a + len_b;
        self.peak_window_values = self.peak_window_values.max(out_window);
    }

    pub fn record_conv_time(&mut self, out_window: u64, ns: u64) {
        let slot = out_window.max(1).ilog2().saturating_sub(9) as usize;
        if self.conv_ns_by_log2.len() <= slot {
            self.conv_ns_by_log2.resize(slot + 1, 0);
        }
        self.conv_ns_by_log2[slot] += ns;
    }

    pub fn record_maxplus(&mut self, len_a: u64, len_b: u64, out_window: u64) {
        self.maxplus_calls += 1;
        self.maxplus_input_values += len_a + len_b;
        self.peak_window_values = self.peak_window_values.max(out_window);
    }
}
