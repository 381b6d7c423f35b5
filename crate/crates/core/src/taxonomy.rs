//! Category taxonomy for social support (SS) and social isolation (SI).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CategoryParseError;

/// Coarse-grained document category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoarseCategory {
    /// Social support.
    SS,
    /// Social isolation.
    SI,
}

impl CoarseCategory {
    pub const ALL: [CoarseCategory; 2] = [CoarseCategory::SS, CoarseCategory::SI];

    pub fn name(self) -> &'static str {
        match self {
            CoarseCategory::SS => "SS",
            CoarseCategory::SI => "SI",
        }
    }
}

impl fmt::Display for CoarseCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoarseCategory {
    type Err = CategoryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SS" | "SOCIAL_SUPPORT" => Ok(CoarseCategory::SS),
            "SI" | "SOCIAL_ISOLATION" => Ok(CoarseCategory::SI),
            _ => Err(CategoryParseError(s.to_string())),
        }
    }
}

/// Fine-grained category.
///
/// Nine main categories plus `Probable`, which carries its side. Probable
/// mentions can appear in gold annotations but neither engine produces them
/// and they never contribute to document labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FineCategory {
    SocialNetwork,
    EmotionalSupport,
    InstrumentalSupport,
    SsGeneral,
    Loneliness,
    NoSocialNetwork,
    NoEmotionalSupport,
    NoInstrumentalSupport,
    SiGeneral,
    Probable(CoarseCategory),
}

impl FineCategory {
    /// The nine categories that take part in document labels and evaluation,
    /// SS side first.
    pub const MAIN: [FineCategory; 9] = [
        FineCategory::SocialNetwork,
        FineCategory::EmotionalSupport,
        FineCategory::InstrumentalSupport,
        FineCategory::SsGeneral,
        FineCategory::Loneliness,
        FineCategory::NoSocialNetwork,
        FineCategory::NoEmotionalSupport,
        FineCategory::NoInstrumentalSupport,
        FineCategory::SiGeneral,
    ];

    pub fn side(self) -> CoarseCategory {
        use FineCategory::*;
        match self {
            SocialNetwork | EmotionalSupport | InstrumentalSupport | SsGeneral => CoarseCategory::SS,
            Loneliness | NoSocialNetwork | NoEmotionalSupport | NoInstrumentalSupport
            | SiGeneral => CoarseCategory::SI,
            Probable(side) => side,
        }
    }

    pub fn is_probable(self) -> bool {
        matches!(self, FineCategory::Probable(_))
    }

    pub fn name(self) -> &'static str {
        use FineCategory::*;
        match self {
            SocialNetwork => "social_network",
            EmotionalSupport => "emotional_support",
            InstrumentalSupport => "instrumental_support",
            SsGeneral => "ss_general",
            Loneliness => "loneliness",
            NoSocialNetwork => "no_social_network",
            NoEmotionalSupport => "no_emotional_support",
            NoInstrumentalSupport => "no_instrumental_support",
            SiGeneral => "si_general",
            Probable(CoarseCategory::SS) => "ss_probable",
            Probable(CoarseCategory::SI) => "si_probable",
        }
    }
}

impl fmt::Display for FineCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FineCategory {
    type Err = CategoryParseError;

    /// Accepts the canonical snake-case names; spaces and hyphens are read
    /// as underscores and case is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .trim()
            .chars()
            .map(|c| match c {
                ' ' | '-' => '_',
                c => c.to_ascii_lowercase(),
            })
            .collect();
        use FineCategory::*;
        Ok(match key.as_str() {
            "social_network" => SocialNetwork,
            "emotional_support" => EmotionalSupport,
            "instrumental_support" => InstrumentalSupport,
            "ss_general" => SsGeneral,
            "loneliness" => Loneliness,
            "no_social_network" => NoSocialNetwork,
            "no_emotional_support" => NoEmotionalSupport,
            "no_instrumental_support" => NoInstrumentalSupport,
            "si_general" => SiGeneral,
            "ss_probable" => Probable(CoarseCategory::SS),
            "si_probable" => Probable(CoarseCategory::SI),
            _ => return Err(CategoryParseError(s.to_string())),
        })
    }
}

macro_rules! serde_via_str {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(self.name())
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_str!(FineCategory);
serde_via_str!(CoarseCategory);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sides_are_four_and_five() {
        let ss = FineCategory::MAIN.iter().filter(|c| c.side() == CoarseCategory::SS).count();
        let si = FineCategory::MAIN.iter().filter(|c| c.side() == CoarseCategory::SI).count();
        assert_eq!((ss, si), (4, 5));
    }

    #[test]
    fn names_round_trip() {
        let all = FineCategory::MAIN
            .into_iter()
            .chain([FineCategory::Probable(CoarseCategory::SS), FineCategory::Probable(CoarseCategory::SI)]);
        for c in all {
            assert_eq!(c.name().parse::<FineCategory>().unwrap(), c);
        }
        assert_eq!("No Social-Network".parse::<FineCategory>().unwrap(), FineCategory::NoSocialNetwork);
        assert!("lonelinesss".parse::<FineCategory>().is_err());
    }

    #[test]
    fn serde_uses_names() {
        let json = serde_json::to_string(&FineCategory::NoInstrumentalSupport).unwrap();
        assert_eq!(json, "\"no_instrumental_support\"");
        let c: CoarseCategory = serde_json::from_str("\"SI\"").unwrap();
        assert_eq!(c, CoarseCategory::SI);
    }
}
