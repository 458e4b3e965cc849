use crate::coding::LineCodedFrame;

/// What happened at a frame boundary on one sr edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameBoundary {
    /// A freshly staged frame entered the shift register.
    Loaded,
    /// The active frame restarted from bit 0.
    Repeat,
}

/// Looping parallel-in serial-out register.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Piso {
    frame: Option<LineCodedFrame>,
    position: usize,
}

impl Piso {
    pub fn frame(&self) -> Option<&LineCodedFrame> {
        self.frame.as_ref()
    }

    /// Index of the bit emitted on the next sr edge.
    pub fn position(&self) -> usize {
        self.position
    }
}

/// One anchor's output stage: buffer register, PISO, and the OOK line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontEnd {
    id: usize,
    buffer_reg: Option<LineCodedFrame>,
    staged: bool,
    piso: Piso,
    output_line: u8,
    active_since: Option<u64>,
}

impl FrontEnd {
    pub fn new(id: usize) -> Self {
        Self {
            id,
            buffer_reg: None,
            staged: false,
            piso: Piso::default(),
            output_line: 0,
            active_since: None,
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn buffer_reg(&self) -> Option<&LineCodedFrame> {
        self.buffer_reg.as_ref()
    }

    /// A frame sits in the buffer register waiting for the next boundary.
    pub fn is_staged(&self) -> bool {
        self.staged
    }

    pub fn piso(&self) -> &Piso {
        &self.piso
    }

    pub fn output_line(&self) -> u8 {
        self.output_line
    }

    /// sr tick on which the active frame was last loaded into the PISO.
    pub fn active_since(&self) -> Option<u64> {
        self.active_since
    }

    /// De-multiplexer write into the buffer register.
    pub(crate) fn load_buffer(&mut self, frame: LineCodedFrame) {
        self.buffer_reg = Some(frame);
        self.staged = true;
    }

    /// sr ticks until the next emitted bit is bit 0 of the most recently
    /// loaded frame; `None` if nothing was ever loaded.
    pub fn next_frame_offset(&self) -> Option<usize> {
        match (&self.piso.frame, self.staged) {
            (None, false) => None,
            (None, true) => Some(0),
            (Some(f), _) => Some((f.len() - self.piso.position) % f.len()),
        }
    }

    /// One sr_clk edge. A staged frame replaces the active one only when the
    /// position is at a frame boundary.
    pub(crate) fn sr_edge(&mut self, sr_tick: u64) -> Option<FrameBoundary> {
        let mut boundary = None;
        if self.piso.position == 0 {
            if self.staged {
                self.piso.frame = self.buffer_reg.clone();
                self.staged = false;
                self.active_since = Some(sr_tick);
                boundary = Some(FrameBoundary::Loaded);
            } else if self.piso.frame.is_some() {
                boundary = Some(FrameBoundary::Repeat);
            }
        }
        match &self.piso.frame {
            Some(frame) => {
                let bits = frame.bits().as_slice();
                self.output_line = bits[self.piso.position];
                self.piso.position = (self.piso.position + 1) % bits.len();
            }
            None => self.output_line = 0,
        }
        boundary
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitBlock;
    use crate::coding::RllScheme;

    fn frame(s: &str) -> LineCodedFrame {
        LineCodedFrame::new(RllScheme::Manchester, BitBlock::from_bit_str(s).unwrap())
    }

    fn emit(fe: &mut FrontEnd, n: usize) -> String {
        (0..n)
            .map(|_| {
                fe.sr_edge(0);
                if fe.output_line() == 1 { '1' } else { '0' }
            })
            .collect()
    }

    #[test]
    fn reset_state_emits_zeros() {
        let mut fe = FrontEnd::new(0);
        assert_eq!(emit(&mut fe, 5), "00000");
        assert_eq!(fe.next_frame_offset(), None);
    }

    #[test]
    fn loops_the_active_frame() {
        let mut fe = FrontEnd::new(3);
        fe.load_buffer(frame("1001"));
        assert_eq!(fe.next_frame_offset(), Some(0));
        assert_eq!(fe.sr_edge(7), Some(FrameBoundary::Loaded));
        assert_eq!(fe.active_since(), Some(7));
        assert_eq!(emit(&mut fe, 3), "001");
        assert_eq!(fe.sr_edge(11), Some(FrameBoundary::Repeat));
        assert_eq!(fe.active_since(), Some(7));
        assert_eq!(emit(&mut fe, 7), "0011001");
    }

    #[test]
    fn new_frame_waits_for_boundary() {
        let mut fe = FrontEnd::new(0);
        fe.load_buffer(frame("1010"));
        assert_eq!(emit(&mut fe, 2), "10");
        fe.load_buffer(frame("0101"));
        assert!(fe.is_staged());
        assert_eq!(fe.next_frame_offset(), Some(2));
        assert_eq!(emit(&mut fe, 2), "10");
        assert_eq!(emit(&mut fe, 4), "0101");
        assert!(!fe.is_staged());
    }
}
